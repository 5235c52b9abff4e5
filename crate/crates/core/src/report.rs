//! Byte-stable structured reports.
//!
//! Every command of the binary emits one JSON document: the resolved
//! configuration, the crate version, and the command body, with keys in
//! sorted order. Floats serialize through the shortest round-trip form;
//! non-finite values become strings so no number is silently dropped.
//! Reports carry no timestamps, so a repeated run reproduces its output
//! byte for byte.

use serde_json::{json, Value};

use crate::ahlfors::{AhlforsReport, RieszBoundReport, WorstPair};
use crate::class_calculus::{ComposedClass, ModulusCheckReport};
use crate::kernels::SeminormReport;
use crate::operator::SolveReport;
use crate::regularity::{
    ContinuityReport, HolderEstimate, RegularityExperimentReport, TailBoundReport,
};

/// Version string embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A float as a JSON value; non-finite values become strings.
pub fn float(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::String(x.to_string())
    }
}

/// A float slice as a JSON array.
pub fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| float(x)).collect())
}

fn optional(x: Option<f64>) -> Value {
    x.map_or(Value::Null, float)
}

fn pair_list(ps: &[(f64, f64)]) -> Value {
    Value::Array(ps.iter().map(|&(a, b)| json!([float(a), float(b)])).collect())
}

/// Renders the full report document. Keys are sorted, output ends with a
/// newline.
pub fn render(command: &str, config: Value, body: Value) -> String {
    let doc = json!({
        "command": command,
        "config": config,
        "version": VERSION,
        "report": body,
    });
    let mut out = serde_json::to_string_pretty(&doc).expect("report keys are strings");
    out.push('\n');
    out
}

/// One named column as CSV text, indexed from zero.
pub fn csv_column(header: &str, values: &[f64]) -> String {
    let mut out = String::from("index,");
    out.push_str(header);
    out.push('\n');
    for (i, v) in values.iter().enumerate() {
        out.push_str(&format!("{i},{v}\n"));
    }
    out
}

fn worst_pair(p: &WorstPair) -> Value {
    json!({
        "node": p.node,
        "inner_radius": optional(p.inner_radius),
        "radius": float(p.radius),
        "ratio": float(p.ratio),
    })
}

pub fn ahlfors_value(r: &AhlforsReport) -> Value {
    json!({
        "upsilon": float(r.upsilon),
        "r_cutoff": float(r.r_cutoff),
        "c_upper": float(r.c_upper),
        "c_strong": optional(r.c_strong),
        "worst_pairs": Value::Array(r.worst_pairs.iter().map(worst_pair).collect()),
        "ceiling": optional(r.ceiling),
        "passed": r.passed,
    })
}

pub fn riesz_bound_value(r: &RieszBoundReport) -> Value {
    json!({
        "s": float(r.s),
        "kind": r.kind.name(),
        "measured_sup": float(r.measured_sup),
        "bound_value": optional(r.bound_value),
        "ratio_by_scale": pair_list(&r.ratio_by_scale),
        "passed": r.passed,
    })
}

pub fn seminorm_value(r: &SeminormReport) -> Value {
    json!({
        "s1": float(r.s1),
        "s2": float(r.s2),
        "s3": float(r.s3),
        "potential_norm": float(r.potential_norm),
        "smoothness_seminorm": optional(r.smoothness_seminorm),
        "admissible_triple_count": r.admissible_triple_count,
        "truncated": r.truncated,
        "class_norm": float(r.class_norm),
    })
}

pub fn composed_class_value(r: &ComposedClass) -> Value {
    json!({
        "case": r.case.label(),
        "class": {
            "describe": r.class.describe(),
            "s1": float(r.class.s1),
            "s2": float(r.class.s2),
            "s3": float(r.class.s3),
            "upsilon": float(r.class.upsilon),
            "log_flag": r.class.log_flag,
            "eps_slack": r.class.eps_slack,
        },
        "strong_hypothesis_used": r.strong_hypothesis_used,
    })
}

/// The solve body. `mu` rides along only on request; large vectors belong
/// in a CSV dump instead.
pub fn solve_value(r: &SolveReport, include_mu: bool) -> Value {
    let mut body = json!({
        "n": r.mu.len(),
        "residual_inf": float(r.residual_inf),
        "method": r.method.name(),
        "neumann_terms": r.neumann_terms,
        "condition_estimate": optional(r.condition_estimate),
    });
    if include_mu {
        body["mu"] = floats(&r.mu);
    }
    body
}

pub fn continuity_value(r: &ContinuityReport) -> Value {
    json!({
        "mesh_sizes": r.mesh_sizes,
        "max_jumps": floats(&r.max_jumps),
        "datum_jumps": floats(&r.datum_jumps),
        "ratios": floats(&r.ratios),
        "passed": r.passed,
    })
}

pub fn experiment_value(r: &RegularityExperimentReport) -> Value {
    json!({
        "mesh_sizes": r.mesh_sizes,
        "s1": float(r.s1),
        "s2": float(r.s2),
        "s3": float(r.s3),
        "upsilon": float(r.upsilon),
        "theta": float(r.theta),
        "beta": optional(r.beta),
        "predicted_modulus": r.predicted_modulus.describe(),
        "seminorms": floats(&r.seminorms),
        "growth_ratios": floats(&r.growth_ratios),
        "datum_seminorm": float(r.datum_seminorm),
        "hypothesis_seminorms": r.hypothesis_seminorms.as_deref().map_or(Value::Null, floats),
        "passed": r.passed,
    })
}

pub fn modulus_check_value(r: &ModulusCheckReport) -> Value {
    json!({
        "zero_at_zero": r.zero_at_zero,
        "positive": r.positive,
        "nondecreasing": r.nondecreasing,
        "sup_ratio": float(r.sup_ratio),
        "ratio_by_a": pair_list(&r.ratio_by_a),
        "passed": r.passed,
    })
}

pub fn holder_estimate_value(r: &HolderEstimate) -> Value {
    json!({
        "modulus": r.modulus.describe(),
        "min_dist": float(r.min_dist),
        "seminorm": float(r.seminorm),
        "argmax_pair": [r.argmax_pair.0, r.argmax_pair.1],
        "by_scale": pair_list(&r.by_scale),
    })
}

pub fn tail_bound_value(r: &TailBoundReport) -> Value {
    json!({
        "a": float(r.a),
        "left": float(r.left),
        "right": float(r.right),
        "slack": float(r.slack),
        "passed": r.passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_sorted_and_output_is_stable() {
        let body = json!({"zeta": 1, "alpha": 2});
        let a = render("demo", json!({"seed": 7}), body.clone());
        let b = render("demo", json!({"seed": 7}), body);
        assert_eq!(a, b);
        let alpha = a.find("\"alpha\"").unwrap();
        let zeta = a.find("\"zeta\"").unwrap();
        assert!(alpha < zeta);
        assert!(a.ends_with('\n'));
        assert!(a.contains(&format!("\"version\": \"{VERSION}\"")));
    }

    #[test]
    fn non_finite_floats_become_strings() {
        assert_eq!(float(f64::INFINITY), Value::String("inf".into()));
        assert_eq!(float(f64::NEG_INFINITY), Value::String("-inf".into()));
        assert_eq!(float(f64::NAN), Value::String("NaN".into()));
        assert_eq!(float(0.5), json!(0.5));
    }

    #[test]
    fn csv_column_layout() {
        let csv = csv_column("mu", &[1.0, 0.25]);
        assert_eq!(csv, "index,mu\n0,1\n1,0.25\n");
    }
}
