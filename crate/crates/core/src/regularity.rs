//! Empirical Hölder analysis of sampled functions and the end-to-end
//! regularity experiments.
//!
//! A modulus seminorm on a sampled space is the sup of
//! `|f(x) - f(y)| / omega(d(x, y))` over pairs at or above a cutoff
//! distance. Pairs closer than twice the mesh are excluded by default:
//! below the mesh the sample carries no information about the continuum
//! modulus, only discretization noise.
//!
//! The experiments solve `mu - A mu = g` on a family of refining meshes
//! and operationalize "`mu` has modulus `omega`" as mesh-stability of the
//! measured seminorm: growth ratio at most [`GROWTH_RATIO_CEILING`] per
//! refinement. Finiteness alone is not falsifiable on one finite sample.

use crate::class_calculus::{
    check_modulus_conditions, default_argument_grid, modulus_omega, modulus_varpi, Modulus,
};
use crate::error::{Error, Result};
use crate::exec::map_indexed;
use crate::kernels::{class_membership_report, potential_norm, Kernel};
use crate::operator::{solve_direct, NystromSystem};
use crate::space::SampledMeasureSpace;

/// Seminorms may grow by at most this factor per mesh refinement to count
/// as stable.
pub const GROWTH_RATIO_CEILING: f64 = 1.25;

/// Number of logarithmic distance bins in a seminorm profile.
const SCALE_BINS: usize = 12;

/// A measured modulus seminorm.
#[derive(Debug, Clone)]
pub struct HolderEstimate {
    pub modulus: Modulus,
    /// Pairs below this distance were excluded.
    pub min_dist: f64,
    pub seminorm: f64,
    /// The pair attaining the sup.
    pub argmax_pair: (usize, usize),
    /// `(bin upper edge, bin sup)` over logarithmic distance bins.
    pub by_scale: Vec<(f64, f64)>,
}

/// Sup of `|f(i) - f(j)| / omega(d(i, j))` over pairs with
/// `d(i, j) >= min_dist` (default: twice the mesh). Zero-distance pairs
/// never enter. Errors if the cutoff excludes every pair.
pub fn holder_seminorm(
    f: &[f64],
    space: &SampledMeasureSpace,
    modulus: &Modulus,
    min_dist: Option<f64>,
) -> Result<HolderEstimate> {
    let n = space.n();
    if f.len() != n {
        return Err(Error::invalid(format!("vector has length {}, expected {n}", f.len())));
    }
    let cutoff = match min_dist {
        Some(d) if d >= 0.0 => d,
        Some(d) => return Err(Error::invalid(format!("cutoff must be nonnegative, got {d}"))),
        None => 2.0 * space.mesh(),
    };
    let check = check_modulus_conditions(
        modulus,
        &default_argument_grid(1e-6, space.diameter().max(1e-6)),
    )?;
    if !check.passed {
        return Err(Error::invalid(format!(
            "modulus {} fails the admissibility conditions (sup ratio {})",
            modulus.describe(),
            check.sup_ratio
        )));
    }

    let per_row: Vec<(f64, usize, usize)> = map_indexed(n, |i| {
        let row = space.dist_row(i);
        let mut best = -1.0f64;
        let mut arg = (i, i);
        for j in (i + 1)..n {
            let d = row[j];
            if d < cutoff || d == 0.0 {
                continue;
            }
            let ratio = (f[i] - f[j]).abs() / modulus.eval(d);
            if ratio > best {
                best = ratio;
                arg = (i, j);
            }
        }
        (best, arg.0, arg.1)
    });

    let mut seminorm = -1.0f64;
    let mut argmax_pair = (0usize, 0usize);
    for (v, i, j) in per_row {
        if v > seminorm {
            seminorm = v;
            argmax_pair = (i, j);
        }
    }
    if seminorm < 0.0 {
        return Err(Error::invalid(format!(
            "no pair at distance >= {cutoff} (diameter {})",
            space.diameter()
        )));
    }

    // Scale profile over log bins of [cutoff-or-mesh, diameter].
    let lo = cutoff.max(space.mesh()).max(1e-300);
    let hi = space.diameter().max(lo * (1.0 + 1e-12));
    let log_span = (hi / lo).ln();
    let mut by_scale = vec![0.0f64; SCALE_BINS];
    for i in 0..n {
        let row = space.dist_row(i);
        for j in (i + 1)..n {
            let d = row[j];
            if d < cutoff || d == 0.0 {
                continue;
            }
            let pos = (d.max(lo) / lo).ln() / log_span * SCALE_BINS as f64;
            let bin = (pos as usize).min(SCALE_BINS - 1);
            let ratio = (f[i] - f[j]).abs() / modulus.eval(d);
            if ratio > by_scale[bin] {
                by_scale[bin] = ratio;
            }
        }
    }
    let by_scale = by_scale
        .into_iter()
        .enumerate()
        .map(|(k, sup)| (lo * (log_span * (k + 1) as f64 / SCALE_BINS as f64).exp(), sup))
        .collect();

    Ok(HolderEstimate { modulus: modulus.clone(), min_dist: cutoff, seminorm, argmax_pair, by_scale })
}

/// Outcome of the tail-bound check: the restricted seminorm against
/// `(2 / omega(a)) sup |f|`.
#[derive(Debug, Clone)]
pub struct TailBoundReport {
    pub a: f64,
    pub left: f64,
    pub right: f64,
    pub slack: f64,
    pub passed: bool,
}

/// For pairs at distance `>= a`, the increment quotient is bounded by
/// `(2 / omega(a)) sup |f|` because the modulus is nondecreasing. This
/// always holds; a failure flags a defect in the seminorm scan itself.
pub fn check_remark_om4(
    f: &[f64],
    space: &SampledMeasureSpace,
    modulus: &Modulus,
    a: f64,
) -> Result<TailBoundReport> {
    if !(a > 0.0) {
        return Err(Error::invalid(format!("cutoff must be positive, got {a}")));
    }
    let left = match holder_seminorm(f, space, modulus, Some(a)) {
        Ok(est) => est.seminorm,
        // An empty tail makes the restricted sup zero.
        Err(Error::InvalidArgument(_)) => 0.0,
        Err(e) => return Err(e),
    };
    let sup_f = f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let right = 2.0 / modulus.eval(a) * sup_f;
    let slack = right - left;
    Ok(TailBoundReport { a, left, right, slack, passed: left <= right * (1.0 + 1e-12) })
}

/// Built-in data for the right-hand side `g`.
#[derive(Debug, Clone, PartialEq)]
pub enum Datum {
    /// Constant value.
    Constant(f64),
    /// Ambient coordinate along an axis.
    Coordinate(usize),
    /// `d(., x0)^theta` with `x0` a node index; node indices must refer
    /// to the same geometric point on every mesh of a family.
    DistPower { base: usize, theta: f64 },
    /// Indicator of `coordinate(axis) >= 0`: a built-in discontinuity.
    Step(usize),
}

impl Datum {
    /// Parses `const:C`, `coord:AXIS`, `distpow:NODE:THETA`, `step:AXIS`.
    pub fn parse(spec: &str) -> Result<Self> {
        let parse_err =
            |message: String| Error::Parse { line: 0, message: format!("datum spec: {message}") };
        let (family, rest) = spec
            .split_once(':')
            .ok_or_else(|| parse_err(format!("`{spec}` has no parameters")))?;
        match family {
            "const" => {
                let c: f64 = rest.parse().map_err(|_| parse_err(format!("bad value `{rest}`")))?;
                if !c.is_finite() {
                    return Err(parse_err("constant must be finite".into()));
                }
                Ok(Datum::Constant(c))
            }
            "coord" => {
                let axis: usize =
                    rest.parse().map_err(|_| parse_err(format!("bad axis `{rest}`")))?;
                Ok(Datum::Coordinate(axis))
            }
            "distpow" => {
                let (node, theta) = rest
                    .split_once(':')
                    .ok_or_else(|| parse_err("distpow needs `distpow:NODE:THETA`".into()))?;
                let base: usize =
                    node.parse().map_err(|_| parse_err(format!("bad node `{node}`")))?;
                let theta: f64 =
                    theta.parse().map_err(|_| parse_err(format!("bad theta `{theta}`")))?;
                if !(theta > 0.0 && theta <= 1.0) {
                    return Err(parse_err(format!("theta must lie in (0, 1], got {theta}")));
                }
                Ok(Datum::DistPower { base, theta })
            }
            "step" => {
                let axis: usize =
                    rest.parse().map_err(|_| parse_err(format!("bad axis `{rest}`")))?;
                Ok(Datum::Step(axis))
            }
            other => Err(parse_err(format!("unknown datum family `{other}`"))),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Datum::Constant(c) => format!("const:{c}"),
            Datum::Coordinate(axis) => format!("coord:{axis}"),
            Datum::DistPower { base, theta } => format!("distpow:{base}:{theta}"),
            Datum::Step(axis) => format!("step:{axis}"),
        }
    }

    /// Whether the datum has a jump by construction.
    pub fn is_discontinuous(&self) -> bool {
        matches!(self, Datum::Step(_))
    }

    /// Sampled values on a space.
    pub fn evaluate(&self, space: &SampledMeasureSpace) -> Result<Vec<f64>> {
        let n = space.n();
        match self {
            Datum::Constant(c) => Ok(vec![*c; n]),
            Datum::Coordinate(axis) => {
                if *axis >= space.dim() {
                    return Err(Error::invalid(format!(
                        "axis {axis} out of range for dimension {}",
                        space.dim()
                    )));
                }
                Ok((0..n).map(|i| space.point(i)[*axis]).collect())
            }
            Datum::DistPower { base, theta } => {
                if *base >= n {
                    return Err(Error::invalid(format!(
                        "base node {base} out of range for {n} points"
                    )));
                }
                let row = space.dist_row(*base);
                Ok(row.iter().map(|d| d.powf(*theta)).collect())
            }
            Datum::Step(axis) => {
                if *axis >= space.dim() {
                    return Err(Error::invalid(format!(
                        "axis {axis} out of range for dimension {}",
                        space.dim()
                    )));
                }
                Ok((0..n)
                    .map(|i| if space.point(i)[*axis] >= 0.0 { 1.0 } else { 0.0 })
                    .collect())
            }
        }
    }
}

/// Builds the kernel for one mesh of a family. Analytic kernels ignore
/// the mesh; engineered or tabulated kernels may depend on it.
pub type KernelSource<'a> = &'a dyn Fn(&SampledMeasureSpace) -> Result<Kernel>;

/// Kernel source reusing one mesh-independent kernel.
pub fn shared_kernel(kernel: &Kernel) -> impl Fn(&SampledMeasureSpace) -> Result<Kernel> + '_ {
    move |_| Ok(kernel.clone())
}

fn assemble_scaled<'a>(
    space: &'a SampledMeasureSpace,
    kernel: &Kernel,
    target_norm: Option<f64>,
) -> Result<NystromSystem<'a>> {
    let sys = NystromSystem::assemble(space, kernel)?;
    match target_norm {
        Some(t) if sys.row_sum_norm() > 0.0 => sys.scaled_to_norm(t),
        _ => Ok(sys),
    }
}

fn stable_pair(a: f64, b: f64, factor: f64) -> bool {
    if !a.is_finite() || !b.is_finite() {
        return false;
    }
    if a.abs() <= 1e-14 && b.abs() <= 1e-14 {
        return true;
    }
    b <= factor * a && a <= factor * b
}

/// Per-mesh nearest-neighbor jumps of the solution.
#[derive(Debug, Clone)]
pub struct ContinuityReport {
    pub mesh_sizes: Vec<usize>,
    /// Max `|mu(i) - mu(nearest neighbor of i)|` per mesh.
    pub max_jumps: Vec<f64>,
    /// Max datum jump per mesh, for reference.
    pub datum_jumps: Vec<f64>,
    /// `max_jumps[k + 1] / max_jumps[k]`.
    pub ratios: Vec<f64>,
    /// True when every ratio is below one (jumps shrink under refinement).
    pub passed: bool,
}

fn max_neighbor_jump(space: &SampledMeasureSpace, f: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..space.n() {
        let (j, _) = space.nearest_neighbor(i);
        worst = worst.max((f[i] - f[j]).abs());
    }
    worst
}

/// Solves on each mesh and checks that nearest-neighbor solution jumps
/// shrink under refinement, the sampled proxy for continuity.
pub fn run_continuity_experiment(
    spaces: &[SampledMeasureSpace],
    kernel: KernelSource<'_>,
    datum: &Datum,
    target_norm: Option<f64>,
) -> Result<ContinuityReport> {
    if spaces.len() < 2 {
        return Err(Error::invalid("continuity experiment needs at least 2 meshes"));
    }
    // Precondition: the kernel stays in its potential class under
    // refinement (measured at its nominal exponent).
    let first_kernel = kernel(&spaces[0])?;
    let last_kernel = kernel(&spaces[spaces.len() - 1])?;
    let s = first_kernel.nominal_exponent().unwrap_or(0.0);
    let p_first = potential_norm(&first_kernel, &spaces[0], s)?;
    let p_last = potential_norm(&last_kernel, &spaces[spaces.len() - 1], s)?;
    if !stable_pair(p_first, p_last, 2.0) {
        return Err(Error::invalid(format!(
            "kernel potential norm is not mesh-stable: {p_first} vs {p_last}"
        )));
    }

    let mut mesh_sizes = Vec::new();
    let mut max_jumps = Vec::new();
    let mut datum_jumps = Vec::new();
    for space in spaces {
        let k = kernel(space)?;
        let sys = assemble_scaled(space, &k, target_norm)?;
        let g = datum.evaluate(space)?;
        let report = solve_direct(&sys, &g)?;
        mesh_sizes.push(space.n());
        max_jumps.push(max_neighbor_jump(space, &report.mu));
        datum_jumps.push(max_neighbor_jump(space, &g));
    }
    let ratios: Vec<f64> =
        max_jumps.windows(2).map(|w| if w[0] == 0.0 { 0.0 } else { w[1] / w[0] }).collect();
    let passed = ratios.iter().all(|&r| r < 1.0);
    Ok(ContinuityReport { mesh_sizes, max_jumps, datum_jumps, ratios, passed })
}

/// Multi-mesh seminorm stability under a predicted modulus.
#[derive(Debug, Clone)]
pub struct RegularityExperimentReport {
    pub mesh_sizes: Vec<usize>,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub upsilon: f64,
    pub theta: f64,
    pub beta: Option<f64>,
    pub predicted_modulus: Modulus,
    /// Solution seminorm under the predicted modulus, per mesh.
    pub seminorms: Vec<f64>,
    /// `seminorms[k + 1] / seminorms[k]`.
    pub growth_ratios: Vec<f64>,
    /// Datum seminorm under `r^theta` on the finest mesh.
    pub datum_seminorm: f64,
    /// Seminorms of the operator's action on the constant one function,
    /// when the experiment verifies that hypothesis.
    pub hypothesis_seminorms: Option<Vec<f64>>,
    pub passed: bool,
}

fn check_class_stability(
    kernel: KernelSource<'_>,
    spaces: &[SampledMeasureSpace],
    s1: f64,
    s2: f64,
    s3: f64,
) -> Result<()> {
    let (space_a, space_b) = (&spaces[0], &spaces[spaces.len() - 1]);
    let first = class_membership_report(&kernel(space_a)?, space_a, s1, s2, s3)?;
    let last = class_membership_report(&kernel(space_b)?, space_b, s1, s2, s3)?;
    if !stable_pair(first.class_norm, last.class_norm, 2.0) {
        return Err(Error::invalid(format!(
            "kernel class norm is not mesh-stable: {} vs {}",
            first.class_norm, last.class_norm
        )));
    }
    Ok(())
}

/// Measures the seminorm of the operator's action on the constant one
/// function under `modulus` on every mesh. Refuses when the values are
/// not mesh-stable: the improved bound's hypothesis is checked, never
/// assumed.
fn screen_constant_action(
    spaces: &[SampledMeasureSpace],
    kernel: KernelSource<'_>,
    modulus: &Modulus,
    target_norm: Option<f64>,
) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for space in spaces {
        let k = kernel(space)?;
        let sys = assemble_scaled(space, &k, target_norm)?;
        let ones = vec![1.0; space.n()];
        let a1 = sys.apply(&ones)?;
        values.push(holder_seminorm(&a1, space, modulus, None)?.seminorm);
    }
    let stable = values
        .windows(2)
        .all(|w| w[0] <= 1e-14 || (w[1] / w[0]).abs() <= GROWTH_RATIO_CEILING);
    if !stable {
        return Err(Error::Hypothesis(format!(
            "the operator's action on the constant function is not stably {}-regular \
             (measured seminorms {:?})",
            modulus.describe(),
            values
        )));
    }
    Ok(values)
}

fn run_modulus_experiment(
    spaces: &[SampledMeasureSpace],
    kernel: KernelSource<'_>,
    datum: &Datum,
    gained: &Modulus,
    theta: f64,
    target_norm: Option<f64>,
) -> Result<(Modulus, Vec<usize>, Vec<f64>, Vec<f64>, f64)> {
    let predicted =
        Modulus::max_of(vec![Modulus::power(theta)?, gained.clone()])?;

    let mut mesh_sizes = Vec::new();
    let mut seminorms = Vec::new();
    for space in spaces {
        let k = kernel(space)?;
        let sys = assemble_scaled(space, &k, target_norm)?;
        let g = datum.evaluate(space)?;
        let solved = solve_direct(&sys, &g)?;
        mesh_sizes.push(space.n());
        seminorms.push(holder_seminorm(&solved.mu, space, &predicted, None)?.seminorm);
    }
    let growth_ratios: Vec<f64> =
        seminorms.windows(2).map(|w| if w[0] == 0.0 { 0.0 } else { w[1] / w[0] }).collect();

    let finest = &spaces[spaces.len() - 1];
    let g_fine = datum.evaluate(finest)?;
    let datum_seminorm =
        holder_seminorm(&g_fine, finest, &Modulus::power(theta)?, None)?.seminorm;

    Ok((predicted, mesh_sizes, seminorms, growth_ratios, datum_seminorm))
}

/// Solves on refining meshes and tests the solution seminorm under
/// `max(r^theta, varpi)` for stability, where `varpi` is the modulus
/// gained through the operator from the class `(s1, s2, s3)`.
#[allow(clippy::too_many_arguments)]
pub fn run_holder_experiment(
    spaces: &[SampledMeasureSpace],
    upsilon: f64,
    s1: f64,
    s2: f64,
    s3: f64,
    theta: f64,
    kernel: KernelSource<'_>,
    datum: &Datum,
    strong_regular: bool,
    target_norm: Option<f64>,
) -> Result<RegularityExperimentReport> {
    if spaces.len() < 2 {
        return Err(Error::invalid("regularity experiment needs at least 2 meshes"));
    }
    let varpi = modulus_varpi(s1, s2, s3, upsilon, strong_regular)?;
    check_class_stability(kernel, spaces, s1, s2, s3)?;
    let (predicted, mesh_sizes, seminorms, growth_ratios, datum_seminorm) =
        run_modulus_experiment(spaces, kernel, datum, &varpi, theta, target_norm)?;
    let passed = growth_ratios.iter().all(|&r| r <= GROWTH_RATIO_CEILING);
    Ok(RegularityExperimentReport {
        mesh_sizes,
        s1,
        s2,
        s3,
        upsilon,
        theta,
        beta: None,
        predicted_modulus: predicted,
        seminorms,
        growth_ratios,
        datum_seminorm,
        hypothesis_seminorms: None,
        passed,
    })
}

/// The improved experiment: the gained modulus uses the extra exponent
/// `beta`, and its hypothesis (that the operator applied to the constant
/// one function carries the improved modulus) is measured on every mesh
/// and refused when unstable, never assumed.
#[allow(clippy::too_many_arguments)]
pub fn run_improved_holder_experiment(
    spaces: &[SampledMeasureSpace],
    upsilon: f64,
    s1: f64,
    s2: f64,
    s3: f64,
    beta: f64,
    theta: f64,
    kernel: KernelSource<'_>,
    datum: &Datum,
    strong_regular: bool,
    target_norm: Option<f64>,
) -> Result<RegularityExperimentReport> {
    if spaces.len() < 2 {
        return Err(Error::invalid("regularity experiment needs at least 2 meshes"));
    }
    let omega = modulus_omega(s1, s2, s3, beta, upsilon, strong_regular)?;
    let hypothesis = screen_constant_action(spaces, kernel, &omega, target_norm)?;
    check_class_stability(kernel, spaces, s1, s2, s3)?;
    let (predicted, mesh_sizes, seminorms, growth_ratios, datum_seminorm) =
        run_modulus_experiment(spaces, kernel, datum, &omega, theta, target_norm)?;
    let passed = growth_ratios.iter().all(|&r| r <= GROWTH_RATIO_CEILING);
    Ok(RegularityExperimentReport {
        mesh_sizes,
        s1,
        s2,
        s3,
        upsilon,
        theta,
        beta: Some(beta),
        predicted_modulus: predicted,
        seminorms,
        growth_ratios,
        datum_seminorm,
        hypothesis_seminorms: Some(hypothesis),
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::KernelMatrix;
    use crate::space::build_circle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn circle_family(sizes: &[usize]) -> Vec<SampledMeasureSpace> {
        sizes.iter().map(|&n| build_circle(n, 1.0).unwrap()).collect()
    }

    #[test]
    fn constant_function_has_zero_seminorm() {
        let space = build_circle(32, 1.0).unwrap();
        let f = vec![3.5; 32];
        let est =
            holder_seminorm(&f, &space, &Modulus::power(0.5).unwrap(), None).unwrap();
        assert_eq!(est.seminorm, 0.0);
        assert!(est.by_scale.iter().all(|&(_, sup)| sup <= est.seminorm));
    }

    #[test]
    fn coordinate_on_circle_is_lipschitz_with_constant_one() {
        let space = build_circle(64, 1.0).unwrap();
        let f = Datum::Coordinate(0).evaluate(&space).unwrap();
        let est =
            holder_seminorm(&f, &space, &Modulus::power(1.0).unwrap(), Some(0.0)).unwrap();
        assert!((est.seminorm - 1.0).abs() <= 1e-12, "{}", est.seminorm);
        // Attained at a diametric pair aligned with the axis.
        let (i, j) = est.argmax_pair;
        assert!((space.dist(i, j) - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn distance_function_is_a_contraction() {
        let space = build_circle(48, 1.0).unwrap();
        let f = Datum::DistPower { base: 0, theta: 1.0 }.evaluate(&space).unwrap();
        let est =
            holder_seminorm(&f, &space, &Modulus::power(1.0).unwrap(), Some(0.0)).unwrap();
        assert!(est.seminorm <= 1.0 + 1e-12, "{}", est.seminorm);
    }

    #[test]
    fn cutoff_excluding_every_pair_is_an_error() {
        let space = build_circle(16, 1.0).unwrap();
        let f = vec![1.0; 16];
        assert!(holder_seminorm(&f, &space, &Modulus::power(1.0).unwrap(), Some(10.0)).is_err());
    }

    #[test]
    fn inadmissible_modulus_is_refused() {
        let space = build_circle(16, 1.0).unwrap();
        let f = vec![1.0; 16];
        let quadratic = Modulus::power(2.0).unwrap();
        assert!(holder_seminorm(&f, &space, &quadratic, None).is_err());
    }

    #[test]
    fn seminorm_is_monotone_in_the_modulus() {
        let space = build_circle(48, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f: Vec<f64> = (0..48).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let small = Modulus::power(0.5).unwrap();
        let big = Modulus::max_of(vec![small.clone(), Modulus::power(1.0).unwrap()]).unwrap();
        let s_small = holder_seminorm(&f, &space, &small, None).unwrap().seminorm;
        let s_big = holder_seminorm(&f, &space, &big, None).unwrap().seminorm;
        assert!(s_big <= s_small);
    }

    #[test]
    fn tail_bound_always_holds() {
        let space = build_circle(64, 1.0).unwrap();
        let constant = vec![2.0; 64];
        let m = Modulus::power(0.5).unwrap();
        let report = check_remark_om4(&constant, &space, &m, 0.5).unwrap();
        assert!(report.passed && report.left == 0.0);

        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let f: Vec<f64> = (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let report = check_remark_om4(&f, &space, &m, 0.5).unwrap();
            assert!(report.passed, "{report:?}");
            assert!(report.slack >= 0.0);
        }
        // Cutoff beyond the diameter: empty sup, still passes.
        let f: Vec<f64> = (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let report = check_remark_om4(&f, &space, &m, 10.0).unwrap();
        assert!(report.passed && report.left == 0.0);
    }

    #[test]
    fn tail_bound_left_side_is_the_restricted_seminorm() {
        let space = build_circle(48, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let f: Vec<f64> = (0..48).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let m = Modulus::power(0.5).unwrap();
        let report = check_remark_om4(&f, &space, &m, 0.4).unwrap();
        let direct = holder_seminorm(&f, &space, &m, Some(0.4)).unwrap();
        assert_eq!(report.left, direct.seminorm);
    }

    #[test]
    fn datum_parsing_round_trip() {
        for spec in ["const:1.5", "coord:0", "distpow:0:0.5", "step:1"] {
            let d = Datum::parse(spec).unwrap();
            assert_eq!(d.describe(), spec);
        }
        for bad in ["const:x", "coord:-1", "distpow:0:1.5", "wave:1", "step"] {
            assert!(Datum::parse(bad).is_err(), "accepted `{bad}`");
        }
    }

    #[test]
    fn datum_evaluation() {
        let space = build_circle(8, 1.0).unwrap();
        assert_eq!(Datum::Constant(2.0).evaluate(&space).unwrap(), vec![2.0; 8]);
        let coord = Datum::Coordinate(0).evaluate(&space).unwrap();
        assert!((coord[0] - 1.0).abs() <= 1e-15);
        let dist = Datum::DistPower { base: 0, theta: 0.5 }.evaluate(&space).unwrap();
        assert_eq!(dist[0], 0.0);
        assert!(dist.iter().all(|&v| v >= 0.0));
        let step = Datum::Step(0).evaluate(&space).unwrap();
        assert!(step.iter().all(|&v| v == 0.0 || v == 1.0));
        assert!(Datum::Coordinate(5).evaluate(&space).is_err());
    }

    #[test]
    fn continuity_with_zero_kernel_reproduces_datum_jumps() {
        let spaces = circle_family(&[32, 64]);
        let kernel = Kernel::parse("scale:0:riesz:0").unwrap();
        let report = run_continuity_experiment(
            &spaces,
            &shared_kernel(&kernel),
            &Datum::Coordinate(0),
            None,
        )
        .unwrap();
        for (mu_jump, g_jump) in report.max_jumps.iter().zip(&report.datum_jumps) {
            assert!((mu_jump - g_jump).abs() <= 1e-12);
        }
        assert!(report.passed);
    }

    #[test]
    fn continuity_jumps_shrink_for_the_singular_kernel() {
        let spaces = circle_family(&[64, 128, 256]);
        let kernel = Kernel::riesz(0.5).unwrap();
        let report = run_continuity_experiment(
            &spaces,
            &shared_kernel(&kernel),
            &Datum::Coordinate(0),
            Some(0.5),
        )
        .unwrap();
        assert!(report.passed, "{report:?}");
        for &r in &report.ratios {
            assert!((0.3..0.8).contains(&r), "ratio {r} outside the halving window");
        }
    }

    #[test]
    fn continuity_flags_a_discontinuous_datum() {
        let spaces = circle_family(&[64, 128, 256]);
        let kernel = Kernel::riesz(0.5).unwrap();
        let report =
            run_continuity_experiment(&spaces, &shared_kernel(&kernel), &Datum::Step(0), Some(0.5))
                .unwrap();
        assert!(!report.passed, "{report:?}");
    }

    #[test]
    fn holder_experiment_surrogate_passes() {
        let spaces = circle_family(&[64, 128, 256]);
        let kernel = Kernel::riesz(0.5).unwrap();
        let datum = Datum::DistPower { base: 0, theta: 0.5 };
        let report = run_holder_experiment(
            &spaces,
            1.0,
            0.5,
            1.5,
            1.0,
            0.5,
            &shared_kernel(&kernel),
            &datum,
            false,
            Some(0.5),
        )
        .unwrap();
        assert_eq!(report.predicted_modulus.describe(), "max(r^0.5, r^0.5)");
        assert!(report.passed, "{report:?}");
        assert!(report.datum_seminorm <= 1.0 + 1e-12);
    }

    #[test]
    fn holder_experiment_with_zero_kernel_is_bounded_by_the_datum() {
        let spaces = circle_family(&[32, 64]);
        let kernel = Kernel::parse("scale:0:riesz:0").unwrap();
        let datum = Datum::DistPower { base: 0, theta: 0.5 };
        let report = run_holder_experiment(
            &spaces,
            1.0,
            0.5,
            1.5,
            1.0,
            0.5,
            &shared_kernel(&kernel),
            &datum,
            false,
            None,
        )
        .unwrap();
        // mu = g and r^theta <= max(r^theta, varpi), so the measured
        // seminorm cannot exceed the datum seminorm.
        for &s in &report.seminorms {
            assert!(s <= report.datum_seminorm + 1e-12);
        }
    }

    #[test]
    fn improved_experiment_beats_the_base_modulus() {
        let spaces = circle_family(&[64, 128, 256]);
        let kernel = Kernel::riesz(0.5).unwrap();
        let datum = Datum::DistPower { base: 0, theta: 0.5 };
        let base = run_holder_experiment(
            &spaces,
            1.0,
            0.5,
            1.5,
            1.0,
            0.5,
            &shared_kernel(&kernel),
            &datum,
            false,
            Some(0.5),
        )
        .unwrap();
        let improved = run_improved_holder_experiment(
            &spaces,
            1.0,
            0.5,
            1.5,
            1.0,
            1.0,
            0.5,
            &shared_kernel(&kernel),
            &datum,
            false,
            Some(0.5),
        )
        .unwrap();
        assert!(improved.passed, "{improved:?}");
        assert!(improved.hypothesis_seminorms.is_some());
        // With beta = s3 = 1 the gained power branch strengthens from
        // min{0.5, 1} to min{1.5, 1}.
        let b = match &base.predicted_modulus {
            Modulus::MaxOf(parts) => parts[1].clone(),
            other => other.clone(),
        };
        let i = match &improved.predicted_modulus {
            Modulus::MaxOf(parts) => parts[1].clone(),
            other => other.clone(),
        };
        assert_eq!(b, Modulus::Power { beta: 0.5 });
        assert_eq!(i, Modulus::Power { beta: 1.0 });
    }

    fn parity_kernel(space: &SampledMeasureSpace) -> Result<Kernel> {
        let n = space.n();
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    values[i * n + j] = if i % 2 == 0 { 1.0 } else { -1.0 };
                }
            }
        }
        Ok(Kernel::Tabulated(KernelMatrix::new(n, values, space.label())?))
    }

    #[test]
    fn oscillating_kernel_fails_the_hypothesis_check() {
        // K(x_i, y) = +-1 with the node parity: A[K,1] oscillates at the
        // mesh scale, so its improved-modulus seminorm grows under
        // refinement and the experiment must refuse to proceed.
        let spaces = circle_family(&[64, 128, 256]);
        let result = run_improved_holder_experiment(
            &spaces,
            1.0,
            0.0,
            1.0,
            1.0,
            1.0,
            0.5,
            &parity_kernel,
            &Datum::Constant(1.0),
            false,
            Some(0.5),
        );
        match result {
            Err(Error::Hypothesis(msg)) => assert!(msg.contains("seminorms"), "{msg}"),
            other => panic!("expected hypothesis refusal, got {other:?}"),
        }
    }

    #[test]
    fn experiments_need_two_meshes() {
        let spaces = circle_family(&[64]);
        let kernel = Kernel::riesz(0.5).unwrap();
        assert!(run_continuity_experiment(
            &spaces,
            &shared_kernel(&kernel),
            &Datum::Constant(1.0),
            None
        )
        .is_err());
        assert!(run_holder_experiment(
            &spaces,
            1.0,
            0.5,
            1.5,
            1.0,
            0.5,
            &shared_kernel(&kernel),
            &Datum::Constant(1.0),
            false,
            None
        )
        .is_err());
    }
}
