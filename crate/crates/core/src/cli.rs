//! Command-line driver.
//!
//! Each subcommand resolves a run configuration from flags and spec
//! strings, calls into the library, and emits one deterministic report
//! (see [`crate::report`]) to stdout or `--out`. Exit codes follow the
//! scripting contract: 0 when the run passed, 1 when a check failed, 2 on
//! configuration errors.
//!
//! Spec grammars:
//!
//! - space: `circle:N[:R]`, `cantor:LEVEL`, `interval:N`, `cusp:N`,
//!   `cloud:PATH`, or a bare point-cloud path,
//! - kernel: as [`Kernel::parse`],
//! - datum: as [`Datum::parse`],
//! - class and split: as [`KernelClass::parse`] and [`parse_split`],
//! - modulus: `pow:BETA` or `logpow:THETA`.

use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::ahlfors::{
    composite_integral_check, estimate_strong_upper_ahlfors, estimate_upper_ahlfors,
    verify_ball_bound, verify_localized_bounds, PairSample,
};
use crate::class_calculus::{
    check_modulus_conditions, compose_general_with_eps, default_argument_grid, parse_split,
    smoothing_order, KernelClass, Modulus, EPS_DEFAULT,
};
use crate::error::{Error, Result};
use crate::exec::worker_count;
use crate::kernels::Kernel;
use crate::operator::{solve_direct, solve_neumann, verify_bootstrap, NystromSystem};
use crate::regularity::{
    check_remark_om4, holder_seminorm, run_continuity_experiment, run_holder_experiment,
    run_improved_holder_experiment, shared_kernel, Datum,
};
use crate::report::{self, float, floats};
use crate::space::{
    build_cantor, build_circle, build_weighted_interval, load_point_cloud, SampledMeasureSpace,
    WeightProfile,
};

/// Default ceiling for the estimated Ahlfors constant.
pub const DEFAULT_CEILING: f64 = 100.0;
/// Default row-sum norm kernels are scaled to before a solve.
pub const DEFAULT_TARGET_NORM: f64 = 0.5;

const NEUMANN_TOL: f64 = 1e-12;
const NEUMANN_MAX_TERMS: u32 = 1000;

#[derive(Parser)]
#[command(
    name = "fredholm-metric",
    version,
    about = "Weakly singular Fredholm equations of the second kind on sampled metric measure spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate upper Ahlfors constants and check them against a ceiling.
    CheckAhlfors(CheckAhlforsArgs),
    /// Compose a kernel class with a potential factor and report the case.
    ComposeClass(ComposeClassArgs),
    /// Solve mu = A[K, mu] + g on one mesh and verify the bootstrap identity.
    Solve(SolveArgs),
    /// Run a multi-mesh regularity experiment.
    Experiment(ExperimentArgs),
    /// Check the integral bounds implied by upper Ahlfors regularity.
    VerifyBounds(VerifyBoundsArgs),
    /// Measure a Holder seminorm under a modulus on one mesh.
    Seminorm(SeminormArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckAhlfors(_) => "check-ahlfors",
            Command::ComposeClass(_) => "compose-class",
            Command::Solve(_) => "solve",
            Command::Experiment(_) => "experiment",
            Command::VerifyBounds(_) => "verify-bounds",
            Command::Seminorm(_) => "seminorm",
        }
    }
}

#[derive(Args)]
struct Common {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for any sampled scan in the run.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CheckAhlforsArgs {
    /// Space spec (see module docs).
    #[arg(long)]
    space: String,
    /// Homogeneity exponent to test.
    #[arg(long)]
    upsilon: f64,
    /// Estimate the annulus constant instead of the ball constant.
    #[arg(long)]
    strong: bool,
    /// Ceiling the estimated constant must stay below.
    #[arg(long, default_value_t = DEFAULT_CEILING)]
    ceiling: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ComposeClassArgs {
    /// First factor: class:s1,s2,s3@upsilon.
    class: String,
    /// Smoothness split: split:s2p,s2pp.
    split: String,
    /// Second factor potential exponent: t1:VALUE.
    t1: String,
    /// Assert strong upper regularity in the boundary cases.
    #[arg(long)]
    strong: bool,
    /// Slack exponent used by the boundary cases.
    #[arg(long, default_value_t = EPS_DEFAULT)]
    eps: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    space: String,
    #[arg(long)]
    kernel: String,
    #[arg(long)]
    datum: String,
    /// Row-sum norm the kernel is scaled to (zero kernels stay as given).
    #[arg(long, default_value_t = DEFAULT_TARGET_NORM)]
    target_norm: f64,
    /// Use the kernel as given, without scaling.
    #[arg(long)]
    no_scale: bool,
    /// Include the solution vector in the report.
    #[arg(long)]
    include_mu: bool,
    /// Write the solution as a CSV column here.
    #[arg(long)]
    dump_mu: Option<PathBuf>,
    /// Term tolerance for the Neumann comparison solve.
    #[arg(long, default_value_t = NEUMANN_TOL)]
    neumann_tol: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExperimentKind {
    Continuity,
    Holder,
    Improved,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Space family: circle, interval, cusp, or cantor.
    #[arg(long)]
    space: String,
    /// Mesh sizes, comma separated (recursion levels for cantor).
    #[arg(long, value_delimiter = ',')]
    meshes: Vec<usize>,
    #[arg(long, value_enum)]
    kind: ExperimentKind,
    #[arg(long)]
    kernel: String,
    #[arg(long)]
    datum: String,
    /// Kernel class class:s1,s2,s3@upsilon (holder and improved kinds).
    #[arg(long)]
    class: Option<String>,
    /// Datum smoothness exponent.
    #[arg(long, default_value_t = 0.5)]
    theta: f64,
    /// Improvement exponent (improved kind).
    #[arg(long)]
    beta: Option<f64>,
    /// Assert strong upper regularity where the equality branches need it.
    #[arg(long)]
    strong: bool,
    #[arg(long, default_value_t = DEFAULT_TARGET_NORM)]
    target_norm: f64,
    #[arg(long)]
    no_scale: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyBoundsArgs {
    #[arg(long)]
    space: String,
    #[arg(long)]
    upsilon: f64,
    /// Riesz exponent s.
    #[arg(long)]
    exponent: f64,
    /// Split radius for the ball bound; omit to run the localized scan.
    #[arg(long)]
    split: Option<f64>,
    /// Second exponent; adds the composite-integral shape check.
    #[arg(long)]
    composite: Option<f64>,
    /// Assert strong upper regularity (composite equality branch).
    #[arg(long)]
    strong: bool,
    /// Sampled ordered pairs for the composite check; 0 scans all pairs.
    #[arg(long, default_value_t = 4096)]
    pairs: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SeminormArgs {
    #[arg(long)]
    space: String,
    #[arg(long)]
    datum: String,
    /// pow:BETA or logpow:THETA.
    #[arg(long)]
    modulus: String,
    /// Ignore pairs below this distance (default: twice the mesh width).
    #[arg(long)]
    min_dist: Option<f64>,
    /// Also check the tail bound at this cutoff radius.
    #[arg(long)]
    tail_a: Option<f64>,
    #[command(flatten)]
    common: Common,
}

/// Parses a space spec. Builder specs come first; anything else is read as
/// a point-cloud path.
pub fn parse_space(spec: &str) -> Result<SampledMeasureSpace> {
    if let Some(rest) = spec.strip_prefix("circle:") {
        let parts: Vec<&str> = rest.split(':').collect();
        return match parts.as_slice() {
            [n] => build_circle(parse_count(n, "node count")?, 1.0),
            [n, r] => {
                build_circle(parse_count(n, "node count")?, parse_positive(r, "radius")?)
            }
            _ => Err(space_spec_error(spec)),
        };
    }
    if let Some(level) = spec.strip_prefix("cantor:") {
        let level = parse_count(level, "recursion level")?;
        return build_cantor(level as u32);
    }
    if let Some(n) = spec.strip_prefix("interval:") {
        return build_weighted_interval(parse_count(n, "node count")?, WeightProfile::Uniform);
    }
    if let Some(n) = spec.strip_prefix("cusp:") {
        return build_weighted_interval(parse_count(n, "node count")?, WeightProfile::ExpCusp);
    }
    if let Some(path) = spec.strip_prefix("cloud:") {
        return load_point_cloud(path);
    }
    if spec.contains('/') || Path::new(spec).exists() {
        return load_point_cloud(spec);
    }
    Err(space_spec_error(spec))
}

fn space_spec_error(spec: &str) -> Error {
    Error::Parse {
        line: 0,
        message: format!(
            "unknown space spec '{spec}'; expected circle:N[:R], cantor:LEVEL, interval:N, \
             cusp:N, cloud:PATH, or a point-cloud path"
        ),
    }
}

fn parse_count(text: &str, what: &str) -> Result<usize> {
    let n: usize = text
        .trim()
        .parse()
        .map_err(|_| Error::invalid(format!("{what} must be a positive integer, got '{text}'")))?;
    if n == 0 {
        return Err(Error::invalid(format!("{what} must be positive")));
    }
    Ok(n)
}

fn parse_positive(text: &str, what: &str) -> Result<f64> {
    let x: f64 = text
        .trim()
        .parse()
        .map_err(|_| Error::invalid(format!("{what} must be a number, got '{text}'")))?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::invalid(format!("{what} must be positive and finite, got {x}")));
    }
    Ok(x)
}

/// Parses `pow:BETA` or `logpow:THETA`.
pub fn parse_modulus(spec: &str) -> Result<Modulus> {
    if let Some(beta) = spec.strip_prefix("pow:") {
        return Modulus::power(parse_positive(beta, "power exponent")?);
    }
    if let Some(theta) = spec.strip_prefix("logpow:") {
        return Modulus::log_power(parse_positive(theta, "log-power exponent")?);
    }
    Err(Error::Parse {
        line: 0,
        message: format!("unknown modulus spec '{spec}'; expected pow:BETA or logpow:THETA"),
    })
}

fn parse_t1(spec: &str) -> Result<f64> {
    let value = spec.strip_prefix("t1:").ok_or_else(|| Error::Parse {
        line: 0,
        message: format!("expected t1:VALUE, got '{spec}'"),
    })?;
    value
        .trim()
        .parse()
        .map_err(|_| Error::invalid(format!("t1 must be a number, got '{value}'")))
}

fn build_family_member(family: &str, mesh: usize) -> Result<SampledMeasureSpace> {
    match family {
        "circle" => build_circle(mesh, 1.0),
        "interval" => build_weighted_interval(mesh, WeightProfile::Uniform),
        "cusp" => build_weighted_interval(mesh, WeightProfile::ExpCusp),
        "cantor" => build_cantor(u32::try_from(mesh).map_err(|_| {
            Error::invalid(format!("recursion level {mesh} out of range"))
        })?),
        other => Err(Error::invalid(format!(
            "unknown space family '{other}'; expected circle, interval, cusp, or cantor"
        ))),
    }
}

fn build_family(family: &str, meshes: &[usize]) -> Result<Vec<SampledMeasureSpace>> {
    if meshes.is_empty() {
        return Err(Error::invalid("experiment needs --meshes"));
    }
    meshes.iter().map(|&m| build_family_member(family, m)).collect()
}

struct CommandOutput {
    config: Value,
    body: Value,
    passed: bool,
    out: Option<PathBuf>,
    dumps: Vec<(PathBuf, String)>,
}

/// Runs the CLI on the given argument list and returns the process exit
/// code. Help and version displays return 0, usage errors 2.
pub fn run(args: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let name = cli.command.name();
    match execute(cli.command) {
        Ok(output) => {
            let text = report::render(name, output.config, output.body);
            for (path, content) in &output.dumps {
                if let Err(e) = fs::write(path, content) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            match output.out {
                Some(path) => {
                    if let Err(e) = fs::write(&path, &text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return 2;
                    }
                }
                None => print!("{text}"),
            }
            if output.passed {
                0
            } else {
                1
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(name, &err)
        }
    }
}

/// Failed measurements exit 1; configuration problems exit 2. Everything a
/// compose-class run can reject is configuration.
fn exit_code_for(command: &str, err: &Error) -> i32 {
    if command == "compose-class" {
        return 2;
    }
    match err {
        Error::Solve(_) | Error::Hypothesis(_) | Error::NonFiniteKernel { .. } => 1,
        _ => 2,
    }
}

fn execute(command: Command) -> Result<CommandOutput> {
    match command {
        Command::CheckAhlfors(args) => cmd_check_ahlfors(args),
        Command::ComposeClass(args) => cmd_compose_class(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::VerifyBounds(args) => cmd_verify_bounds(args),
        Command::Seminorm(args) => cmd_seminorm(args),
    }
}

fn cmd_check_ahlfors(args: CheckAhlforsArgs) -> Result<CommandOutput> {
    let space = parse_space(&args.space)?;
    let grid = space.default_radius_grid();
    let estimate = if args.strong {
        estimate_strong_upper_ahlfors(&space, args.upsilon, &grid, None, Some(args.ceiling))?
    } else {
        estimate_upper_ahlfors(&space, args.upsilon, &grid, None, Some(args.ceiling))?
    };
    let config = json!({
        "space": args.space,
        "space_label": space.label(),
        "n": space.n(),
        "upsilon": float(args.upsilon),
        "strong": args.strong,
        "ceiling": float(args.ceiling),
        "seed": args.common.seed,
        "workers": worker_count(),
    });
    Ok(CommandOutput {
        config,
        passed: estimate.passed,
        body: report::ahlfors_value(&estimate),
        out: args.common.out,
        dumps: Vec::new(),
    })
}

fn cmd_compose_class(args: ComposeClassArgs) -> Result<CommandOutput> {
    let class = KernelClass::parse(&args.class)?;
    let (s2p, s2pp) = parse_split(&args.split)?;
    let t1 = parse_t1(&args.t1)?;
    let composed = compose_general_with_eps(&class, s2p, s2pp, t1, args.strong, args.eps)?;
    let order = smoothing_order(class.s1, class.upsilon)?;
    let config = json!({
        "class": args.class,
        "split": args.split,
        "t1": float(t1),
        "strong": args.strong,
        "eps": float(args.eps),
        "seed": args.common.seed,
        "workers": worker_count(),
    });
    let body = json!({
        "composition": report::composed_class_value(&composed),
        "smoothing_order": order,
    });
    Ok(CommandOutput { config, body, passed: true, out: args.common.out, dumps: Vec::new() })
}

fn cmd_solve(args: SolveArgs) -> Result<CommandOutput> {
    let space = parse_space(&args.space)?;
    let kernel = Kernel::parse(&args.kernel)?;
    let datum = Datum::parse(&args.datum)?;
    let g = datum.evaluate(&space)?;
    let base = NystromSystem::assemble(&space, &kernel)?;
    let system = if args.no_scale || base.row_sum_norm() == 0.0 {
        base
    } else {
        base.scaled_to_norm(args.target_norm)?
    };

    let direct = solve_direct(&system, &g)?;
    let mut bootstrap = Vec::new();
    for r in [1u32, 2, 3] {
        let deviation = verify_bootstrap(&system, &direct.mu, &g, r)?;
        bootstrap.push(json!({ "r": r, "deviation": float(deviation) }));
    }
    let neumann = match solve_neumann(&system, &g, args.neumann_tol, NEUMANN_MAX_TERMS) {
        Ok(rep) => {
            let diff = rep
                .mu
                .iter()
                .zip(&direct.mu)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0_f64, f64::max);
            json!({
                "solve": report::solve_value(&rep, false),
                "max_diff_vs_direct": float(diff),
            })
        }
        Err(e) => json!({ "refused": e.to_string() }),
    };

    let config = json!({
        "space": args.space,
        "space_label": space.label(),
        "n": space.n(),
        "kernel": kernel.describe(),
        "datum": datum.describe(),
        "target_norm": if args.no_scale { Value::Null } else { float(args.target_norm) },
        "row_sum_norm": float(system.row_sum_norm()),
        "neumann_tol": float(args.neumann_tol),
        "seed": args.common.seed,
        "workers": worker_count(),
    });
    let body = json!({
        "direct": report::solve_value(&direct, args.include_mu),
        "bootstrap": bootstrap,
        "neumann": neumann,
    });
    let mut dumps = Vec::new();
    if let Some(path) = args.dump_mu {
        dumps.push((path, report::csv_column("mu", &direct.mu)));
    }
    Ok(CommandOutput { config, body, passed: true, out: args.common.out, dumps })
}

fn cmd_experiment(args: ExperimentArgs) -> Result<CommandOutput> {
    let spaces = build_family(&args.space, &args.meshes)?;
    let kernel = Kernel::parse(&args.kernel)?;
    let datum = Datum::parse(&args.datum)?;
    let target = if args.no_scale { None } else { Some(args.target_norm) };
    let source = shared_kernel(&kernel);

    let class = match &args.class {
        Some(spec) => Some(KernelClass::parse(spec)?),
        None => None,
    };
    let need_class = || {
        class
            .clone()
            .ok_or_else(|| Error::invalid("this experiment kind needs --class"))
    };

    let (body, passed) = match args.kind {
        ExperimentKind::Continuity => {
            let rep = run_continuity_experiment(&spaces, &source, &datum, target)?;
            (report::continuity_value(&rep), rep.passed)
        }
        ExperimentKind::Holder => {
            let c = need_class()?;
            let rep = run_holder_experiment(
                &spaces,
                c.upsilon,
                c.s1,
                c.s2,
                c.s3,
                args.theta,
                &source,
                &datum,
                args.strong,
                target,
            )?;
            (report::experiment_value(&rep), rep.passed)
        }
        ExperimentKind::Improved => {
            let c = need_class()?;
            let beta = args
                .beta
                .ok_or_else(|| Error::invalid("the improved kind needs --beta"))?;
            let rep = run_improved_holder_experiment(
                &spaces,
                c.upsilon,
                c.s1,
                c.s2,
                c.s3,
                beta,
                args.theta,
                &source,
                &datum,
                args.strong,
                target,
            )?;
            (report::experiment_value(&rep), rep.passed)
        }
    };

    let config = json!({
        "space": args.space,
        "meshes": args.meshes,
        "kind": format!("{:?}", args.kind).to_lowercase(),
        "kernel": kernel.describe(),
        "datum": datum.describe(),
        "class": class.as_ref().map(|c| c.describe()),
        "theta": float(args.theta),
        "beta": args.beta.map_or(Value::Null, float),
        "strong": args.strong,
        "target_norm": target.map_or(Value::Null, float),
        "seed": args.common.seed,
        "workers": worker_count(),
    });
    Ok(CommandOutput { config, body, passed, out: args.common.out, dumps: Vec::new() })
}

fn cmd_verify_bounds(args: VerifyBoundsArgs) -> Result<CommandOutput> {
    let space = parse_space(&args.space)?;
    let grid = space.default_radius_grid();
    let estimate = estimate_upper_ahlfors(&space, args.upsilon, &grid, None, None)?;

    let mut body = serde_json::Map::new();
    let mut passed = true;
    body.insert("c_upper".into(), float(estimate.c_upper));
    if let Some(a) = args.split {
        let rep = verify_ball_bound(&space, args.upsilon, args.exponent, a, estimate.c_upper)?;
        passed &= rep.passed;
        body.insert("ball".into(), report::riesz_bound_value(&rep));
    } else {
        let rep = verify_localized_bounds(&space, args.upsilon, args.exponent, &grid)?;
        passed &= rep.passed;
        body.insert("localized".into(), report::riesz_bound_value(&rep));
    }
    if let Some(s2) = args.composite {
        let sample = if args.pairs == 0 {
            PairSample::All
        } else {
            PairSample::Random { count: args.pairs, seed: args.common.seed }
        };
        let rep =
            composite_integral_check(&space, args.upsilon, args.exponent, s2, &sample, args.strong)?;
        passed &= rep.passed;
        body.insert("composite".into(), report::riesz_bound_value(&rep));
    }

    let config = json!({
        "space": args.space,
        "space_label": space.label(),
        "n": space.n(),
        "upsilon": float(args.upsilon),
        "exponent": float(args.exponent),
        "split": args.split.map_or(Value::Null, float),
        "composite": args.composite.map_or(Value::Null, float),
        "strong": args.strong,
        "pairs": args.pairs,
        "seed": args.common.seed,
        "workers": worker_count(),
    });
    Ok(CommandOutput {
        config,
        body: Value::Object(body),
        passed,
        out: args.common.out,
        dumps: Vec::new(),
    })
}

fn cmd_seminorm(args: SeminormArgs) -> Result<CommandOutput> {
    let space = parse_space(&args.space)?;
    let datum = Datum::parse(&args.datum)?;
    let modulus = parse_modulus(&args.modulus)?;
    let f = datum.evaluate(&space)?;
    let estimate = holder_seminorm(&f, &space, &modulus, args.min_dist)?;
    let grid = default_argument_grid(1e-6, space.diameter());
    let check = check_modulus_conditions(&modulus, &grid)?;

    let mut body = serde_json::Map::new();
    body.insert("estimate".into(), report::holder_estimate_value(&estimate));
    body.insert("modulus_check".into(), report::modulus_check_value(&check));
    body.insert("values_preview".into(), floats(&f[..f.len().min(8)]));
    let mut passed = check.passed;
    if let Some(a) = args.tail_a {
        let tail = check_remark_om4(&f, &space, &modulus, a)?;
        passed &= tail.passed;
        body.insert("tail".into(), report::tail_bound_value(&tail));
    }

    let config = json!({
        "space": args.space,
        "space_label": space.label(),
        "n": space.n(),
        "datum": datum.describe(),
        "modulus": modulus.describe(),
        "min_dist": args.min_dist.map_or(Value::Null, float),
        "tail_a": args.tail_a.map_or(Value::Null, float),
        "seed": args.common.seed,
        "workers": worker_count(),
    });
    Ok(CommandOutput {
        config,
        body: Value::Object(body),
        passed,
        out: args.common.out,
        dumps: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> i32 {
        run(std::iter::once("fredholm-metric".to_string())
            .chain(args.iter().map(|s| s.to_string())))
    }

    fn read_json(path: &Path) -> Value {
        serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
    }

    #[test]
    fn space_specs_parse() {
        assert_eq!(parse_space("circle:16").unwrap().n(), 16);
        assert_eq!(parse_space("circle:16:2.0").unwrap().n(), 16);
        assert_eq!(parse_space("cantor:3").unwrap().n(), 8);
        assert_eq!(parse_space("interval:10").unwrap().n(), 10);
        assert_eq!(parse_space("cusp:10").unwrap().n(), 10);
        assert!(parse_space("torus:16").is_err());
        assert!(parse_space("circle:0").is_err());
    }

    #[test]
    fn modulus_and_t1_specs_parse() {
        assert_eq!(parse_modulus("pow:0.5").unwrap().describe(), "r^0.5");
        assert!(parse_modulus("logpow:0.5").is_ok());
        assert!(parse_modulus("exp:0.5").is_err());
        assert_eq!(parse_t1("t1:0.6").unwrap(), 0.6);
        assert!(parse_t1("0.6").is_err());
    }

    #[test]
    fn compose_class_reports_the_fired_case() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("report.json");
        let code = run_args(&[
            "compose-class",
            "class:0.6,1.0,1@1",
            "split:0.8,0.2",
            "t1:0.6",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let doc = read_json(&out);
        assert_eq!(doc["report"]["composition"]["case"], "ix");
        let s1 = doc["report"]["composition"]["class"]["s1"].as_f64().unwrap();
        assert!((s1 - 0.2).abs() < 1e-15);
        assert_eq!(doc["report"]["composition"]["class"]["s2"], json!(0.6));
        assert_eq!(doc["report"]["composition"]["class"]["s3"], json!(0.4));
        assert_eq!(doc["report"]["smoothing_order"], json!(3));
        assert_eq!(doc["version"], json!(report::VERSION));
    }

    #[test]
    fn compose_class_rejects_bad_exponents() {
        let code = run_args(&["compose-class", "class:0.6,1.0,0@1", "split:0.8,0.2", "t1:0.6"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn solve_zero_kernel_returns_the_datum() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("report.json");
        let code = run_args(&[
            "solve",
            "--space",
            "circle:16",
            "--kernel",
            "scale:0:riesz:0",
            "--datum",
            "const:1",
            "--include-mu",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let doc = read_json(&out);
        let mu = doc["report"]["direct"]["mu"].as_array().unwrap();
        assert_eq!(mu.len(), 16);
        for v in mu {
            assert_eq!(v.as_f64().unwrap(), 1.0);
        }
        for entry in doc["report"]["bootstrap"].as_array().unwrap() {
            assert_eq!(entry["deviation"].as_f64().unwrap(), 0.0);
        }
    }

    #[test]
    fn solve_without_scaling_reports_the_neumann_refusal() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("report.json");
        let code = run_args(&[
            "solve",
            "--space",
            "circle:32",
            "--kernel",
            "scale:4:riesz:0",
            "--datum",
            "coord:0",
            "--no-scale",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "direct solve should still run");
        let doc = read_json(&out);
        assert!(doc["report"]["neumann"]["refused"]
            .as_str()
            .unwrap()
            .contains("norm"));
    }

    #[test]
    fn experiment_rejects_a_single_mesh() {
        let code = run_args(&[
            "experiment",
            "--space",
            "circle",
            "--meshes",
            "64",
            "--kind",
            "continuity",
            "--kernel",
            "riesz:0.5",
            "--datum",
            "coord:0",
        ]);
        assert_eq!(code, 2);
    }

    #[test]
    fn malformed_cloud_file_is_a_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cloud.txt");
        fs::write(&path, "not a point cloud\n").unwrap();
        let code = run_args(&[
            "check-ahlfors",
            "--space",
            path.to_str().unwrap(),
            "--upsilon",
            "1",
        ]);
        assert_eq!(code, 2);
    }

    #[test]
    fn reports_are_byte_identical_across_runs() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.json");
        let b = dir.path().join("b.json");
        for path in [&a, &b] {
            let code = run_args(&[
                "verify-bounds",
                "--space",
                "circle:64",
                "--upsilon",
                "1",
                "--exponent",
                "0.5",
                "--split",
                "0.5",
                "--composite",
                "0.5",
                "--strong",
                "--seed",
                "7",
                "--out",
                path.to_str().unwrap(),
            ]);
            assert_eq!(code, 0);
        }
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    }
}
