//! Symbolic exponent calculus for kernel classes.
//!
//! Composing a kernel of class `(s1, s2, s3)` with one of potential type
//! `t1` moves the exponents by an explicit nine-case table keyed on the
//! signs of `s1 + t1 - upsilon` and `s2' + t1 - upsilon`, where the caller
//! splits `s2 = s2' + s2''` with `s2'' <= s3`. Iterating a kernel smooths
//! it; `smoothing_order` computes how many compositions make the iterate
//! bounded and continuous. The Hölder moduli of the solution theory are
//! built here as evaluable [`Modulus`] values.
//!
//! Everything in this module is pure arithmetic on exponents; no kernel is
//! touched. Equality branches (the borderline cases that need the strong
//! regularity hypothesis) are tested exactly in floating point.

use crate::error::{Error, Result};

/// Numeric stand-in for the arbitrarily small slack exponent when a
/// composed class carries one.
pub const EPS_DEFAULT: f64 = 1e-3;

/// A kernel class `(s1, s2, s3)` at homogeneity `upsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelClass {
    /// Potential exponent: `|K| <= C d^-s1`.
    pub s1: f64,
    /// Smoothness denominator exponent.
    pub s2: f64,
    /// Smoothness numerator exponent.
    pub s3: f64,
    /// Homogeneity of the underlying measure.
    pub upsilon: f64,
    /// A `(1 + |ln d|)` factor rides on the `d^-s1` bound.
    pub log_flag: bool,
    /// Exponents hold for every added slack `eps > 0`.
    pub eps_slack: bool,
}

impl KernelClass {
    /// Plain class with no riders. `s2 >= 0`, `s3` in `(0, 1]`, `s1 >= 0`.
    pub fn new(s1: f64, s2: f64, s3: f64, upsilon: f64) -> Result<Self> {
        if !(upsilon > 0.0) || !upsilon.is_finite() {
            return Err(Error::invalid(format!("upsilon must be positive, got {upsilon}")));
        }
        if !(s1 >= 0.0) || !s1.is_finite() {
            return Err(Error::invalid(format!("s1 must be nonnegative, got {s1}")));
        }
        if !(s2 >= 0.0) || !s2.is_finite() {
            return Err(Error::invalid(format!("s2 must be nonnegative, got {s2}")));
        }
        if !(s3 > 0.0 && s3 <= 1.0) {
            return Err(Error::invalid(format!("s3 must lie in (0, 1], got {s3}")));
        }
        Ok(KernelClass { s1, s2, s3, upsilon, log_flag: false, eps_slack: false })
    }

    /// Parses `class:s1,s2,s3@upsilon`.
    pub fn parse(spec: &str) -> Result<Self> {
        let parse_err =
            |message: String| Error::Parse { line: 0, message: format!("class spec: {message}") };
        let body = spec
            .strip_prefix("class:")
            .ok_or_else(|| parse_err(format!("`{spec}` must start with `class:`")))?;
        let (exps, ups) = body
            .split_once('@')
            .ok_or_else(|| parse_err("missing `@upsilon`".into()))?;
        let parts: Vec<&str> = exps.split(',').collect();
        if parts.len() != 3 {
            return Err(parse_err(format!("expected 3 exponents, found {}", parts.len())));
        }
        let mut vals = [0.0f64; 3];
        for (slot, part) in vals.iter_mut().zip(&parts) {
            *slot = part.parse().map_err(|_| parse_err(format!("bad exponent `{part}`")))?;
        }
        let upsilon: f64 = ups.parse().map_err(|_| parse_err(format!("bad upsilon `{ups}`")))?;
        KernelClass::new(vals[0], vals[1], vals[2], upsilon)
    }

    /// Textual form `class:s1,s2,s3@upsilon` (flags appended as suffixes).
    pub fn describe(&self) -> String {
        let mut out = format!("class:{},{},{}@{}", self.s1, self.s2, self.s3, self.upsilon);
        if self.log_flag {
            out.push_str("+log");
        }
        if self.eps_slack {
            out.push_str("+eps");
        }
        out
    }
}

/// Parses `split:s2p,s2pp`.
pub fn parse_split(spec: &str) -> Result<(f64, f64)> {
    let parse_err =
        |message: String| Error::Parse { line: 0, message: format!("split spec: {message}") };
    let body = spec
        .strip_prefix("split:")
        .ok_or_else(|| parse_err(format!("`{spec}` must start with `split:`")))?;
    let (a, b) = body.split_once(',').ok_or_else(|| parse_err("expected two parts".into()))?;
    let s2p: f64 = a.parse().map_err(|_| parse_err(format!("bad value `{a}`")))?;
    let s2pp: f64 = b.parse().map_err(|_| parse_err(format!("bad value `{b}`")))?;
    Ok((s2p, s2pp))
}

/// Outcome of composing two pure potential classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialComposition {
    /// Still singular, with the given potential exponent.
    Potential { exponent: f64 },
    /// Bounded up to a `(1 + |ln d|)` factor.
    BoundedWithLog,
    /// Bounded with a continuous extension to the full square.
    BoundedContinuous,
}

impl PotentialComposition {
    pub fn describe(&self) -> String {
        match self {
            PotentialComposition::Potential { exponent } => format!("potential:{exponent}"),
            PotentialComposition::BoundedWithLog => "bounded+log".into(),
            PotentialComposition::BoundedContinuous => "bounded-continuous".into(),
        }
    }
}

/// Composes potential classes by their co-exponents `t_l = upsilon - s_l`.
/// The product integral gains `upsilon - (t1 + t2)` as its new potential
/// exponent, becoming bounded once the gains cross the homogeneity.
pub fn compose_potential_classes(t1: f64, t2: f64, upsilon: f64) -> Result<PotentialComposition> {
    if !(upsilon > 0.0) || !upsilon.is_finite() {
        return Err(Error::invalid(format!("upsilon must be positive, got {upsilon}")));
    }
    for (name, t) in [("t1", t1), ("t2", t2)] {
        if !(t > 0.0 && t <= upsilon) {
            return Err(Error::invalid(format!(
                "{name} must lie in (0, upsilon], got {t} with upsilon {upsilon}"
            )));
        }
    }
    let total = t1 + t2;
    Ok(if total < upsilon {
        PotentialComposition::Potential { exponent: upsilon - total }
    } else if total == upsilon {
        PotentialComposition::BoundedWithLog
    } else {
        PotentialComposition::BoundedContinuous
    })
}

/// The nine composition cases, keyed on the signs of `s1 + t1 - upsilon`
/// (rows) and `s2' + t1 - upsilon` (columns), both in `<, =, >` order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositionCase {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
}

impl CompositionCase {
    pub fn label(&self) -> &'static str {
        match self {
            CompositionCase::I => "i",
            CompositionCase::II => "ii",
            CompositionCase::III => "iii",
            CompositionCase::IV => "iv",
            CompositionCase::V => "v",
            CompositionCase::VI => "vi",
            CompositionCase::VII => "vii",
            CompositionCase::VIII => "viii",
            CompositionCase::IX => "ix",
        }
    }

    pub fn index(&self) -> usize {
        match self {
            CompositionCase::I => 1,
            CompositionCase::II => 2,
            CompositionCase::III => 3,
            CompositionCase::IV => 4,
            CompositionCase::V => 5,
            CompositionCase::VI => 6,
            CompositionCase::VII => 7,
            CompositionCase::VIII => 8,
            CompositionCase::IX => 9,
        }
    }

    fn from_signs(row: std::cmp::Ordering, col: std::cmp::Ordering) -> Self {
        use std::cmp::Ordering::*;
        match (row, col) {
            (Less, Less) => CompositionCase::I,
            (Less, Equal) => CompositionCase::II,
            (Less, Greater) => CompositionCase::III,
            (Equal, Less) => CompositionCase::IV,
            (Equal, Equal) => CompositionCase::V,
            (Equal, Greater) => CompositionCase::VI,
            (Greater, Less) => CompositionCase::VII,
            (Greater, Equal) => CompositionCase::VIII,
            (Greater, Greater) => CompositionCase::IX,
        }
    }
}

/// A composed class together with which case produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComposedClass {
    pub case: CompositionCase,
    /// The resulting class; slack slots hold the numeric `eps` used.
    pub class: KernelClass,
    /// True when the strong regularity hypothesis was consumed.
    pub strong_hypothesis_used: bool,
}

/// Composes a class `(s1, s2' + s2'', s3)` kernel with a potential-type
/// `t1` kernel, using [`EPS_DEFAULT`] for slack slots.
pub fn compose_general(
    class1: &KernelClass,
    s2p: f64,
    s2pp: f64,
    t1: f64,
    strong_regular: bool,
) -> Result<ComposedClass> {
    compose_general_with_eps(class1, s2p, s2pp, t1, strong_regular, EPS_DEFAULT)
}

/// [`compose_general`] with an explicit numeric value for the slack
/// exponent.
pub fn compose_general_with_eps(
    class1: &KernelClass,
    s2p: f64,
    s2pp: f64,
    t1: f64,
    strong_regular: bool,
    eps: f64,
) -> Result<ComposedClass> {
    let upsilon = class1.upsilon;
    let (s1, s3) = (class1.s1, class1.s3);
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::invalid(format!("eps must be positive, got {eps}")));
    }
    if !(s1 >= 0.0 && s1 < upsilon) {
        return Err(Error::invalid(format!("s1 must lie in [0, upsilon), got {s1}")));
    }
    if !(t1 >= 0.0 && t1 < upsilon) {
        return Err(Error::invalid(format!("t1 must lie in [0, upsilon), got {t1}")));
    }
    if !(s2p >= 0.0 && s2p < upsilon) {
        return Err(Error::invalid(format!("s2' must lie in [0, upsilon), got {s2p}")));
    }
    if !(s2pp >= 0.0 && s2pp <= s3) {
        return Err(Error::invalid(format!("s2'' must lie in [0, s3], got {s2pp}")));
    }
    if (s2p + s2pp - class1.s2).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "split {s2p} + {s2pp} does not sum to s2 = {}",
            class1.s2
        )));
    }
    let row = (s1 + t1).partial_cmp(&upsilon).expect("validated finite");
    let col = (s2p + t1).partial_cmp(&upsilon).expect("validated finite");
    let on_boundary = row == std::cmp::Ordering::Equal || col == std::cmp::Ordering::Equal;
    if on_boundary && !strong_regular {
        return Err(Error::Hypothesis(format!(
            "the borderline composition (s1 + t1 = {} vs upsilon = {upsilon}, s2' + t1 = {}) \
             needs the strong upper regularity hypothesis",
            s1 + t1,
            s2p + t1
        )));
    }

    let case = CompositionCase::from_signs(row, col);
    let first = match row {
        std::cmp::Ordering::Less => 0.0,
        std::cmp::Ordering::Equal => eps,
        std::cmp::Ordering::Greater => s1 + t1 - upsilon,
    };
    let second = match col {
        std::cmp::Ordering::Less => s1.max(t1),
        std::cmp::Ordering::Equal => eps.max(s1).max(t1),
        std::cmp::Ordering::Greater => (s2p + t1 - upsilon).max(s1).max(t1),
    };
    let third = (s3 - s2pp).min(upsilon - s1).min(upsilon - t1);
    let eps_slack = row == std::cmp::Ordering::Equal || col == std::cmp::Ordering::Equal;
    Ok(ComposedClass {
        case,
        class: KernelClass {
            s1: first,
            s2: second,
            s3: third,
            upsilon,
            log_flag: false,
            eps_slack,
        },
        strong_hypothesis_used: on_boundary,
    })
}

/// Picks the split `s2 = s2' + s2''` maximizing the composed third
/// exponent by a grid search over `s2''` in `[0, s3]`; ties resolve to the
/// smallest `s2''`.
pub fn suggest_split(class1: &KernelClass, t1: f64) -> Result<(f64, f64)> {
    let upsilon = class1.upsilon;
    let steps = 100usize;
    let mut best: Option<(f64, f64, f64)> = None;
    for k in 0..=steps {
        let s2pp = class1.s3 * (k as f64) / (steps as f64);
        if s2pp > class1.s2 {
            break;
        }
        let s2p = class1.s2 - s2pp;
        if !(s2p >= 0.0 && s2p < upsilon) {
            continue;
        }
        let third = (class1.s3 - s2pp).min(upsilon - class1.s1).min(upsilon - t1);
        match best {
            Some((_, _, t)) if third <= t => {}
            _ => best = Some((s2p, s2pp, third)),
        }
    }
    match best {
        Some((s2p, s2pp, _)) => Ok((s2p, s2pp)),
        None => Err(Error::invalid(format!(
            "no admissible split of s2 = {} with s2'' in [0, {}] and s2' < {upsilon}",
            class1.s2, class1.s3
        ))),
    }
}

/// How many self-compositions make the iterated kernel bounded and
/// continuous, starting from potential exponent `s` at homogeneity
/// `upsilon`. Each composition subtracts `upsilon - s` from the exponent;
/// the count follows that descent, with one extra step when the descent
/// lands exactly on the boundary (tested exactly in floating point).
pub fn smoothing_order(s: f64, upsilon: f64) -> Result<u32> {
    if !(upsilon > 0.0) || !upsilon.is_finite() {
        return Err(Error::invalid(format!("upsilon must be positive, got {upsilon}")));
    }
    if !(s >= 0.0 && s < upsilon) {
        return Err(Error::invalid(format!(
            "s must lie in [0, upsilon), got {s} with upsilon {upsilon}"
        )));
    }
    if s == 0.0 {
        return Ok(2);
    }
    let gain = upsilon - s;
    // Largest m with m * gain < upsilon; the float division is corrected
    // around the boundary.
    let mut m = (upsilon / gain).floor().max(1.0) as u32;
    while m > 1 && (m as f64) * gain >= upsilon {
        m -= 1;
    }
    while ((m + 1) as f64) * gain < upsilon {
        m += 1;
    }
    let next = ((m + 1) as f64) * gain;
    Ok(if next == upsilon { m + 2 } else { m + 1 })
}

/// An evaluable modulus of continuity.
#[derive(Debug, Clone, PartialEq)]
pub enum Modulus {
    /// `r^beta`.
    Power { beta: f64 },
    /// `r^theta |ln r|` up to `r_theta = e^(-1/theta)`, constant beyond.
    LogPower { theta: f64 },
    /// Pointwise maximum.
    MaxOf(Vec<Modulus>),
}

impl Modulus {
    pub fn power(beta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::invalid(format!("power modulus needs beta > 0, got {beta}")));
        }
        Ok(Modulus::Power { beta })
    }

    pub fn log_power(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(Error::invalid(format!("theta must lie in (0, 1], got {theta}")));
        }
        Ok(Modulus::LogPower { theta })
    }

    pub fn max_of(parts: Vec<Modulus>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::invalid("max modulus needs at least one part"));
        }
        Ok(Modulus::MaxOf(parts))
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self {
            Modulus::Power { beta } => {
                if r <= 0.0 {
                    0.0
                } else {
                    r.powf(*beta)
                }
            }
            Modulus::LogPower { theta } => omega_theta(*theta, r).expect("theta was validated"),
            Modulus::MaxOf(parts) => {
                parts.iter().map(|m| m.eval(r)).fold(0.0f64, f64::max)
            }
        }
    }

    /// `r^b`, `omega_theta(t; plateau=v)`, `max(..., ...)`.
    pub fn describe(&self) -> String {
        match self {
            Modulus::Power { beta } => format!("r^{beta}"),
            Modulus::LogPower { theta } => {
                let r_theta = (-1.0 / theta).exp();
                format!("omega_theta({theta}; plateau={})", r_theta.powf(*theta) / theta)
            }
            Modulus::MaxOf(parts) => {
                let inner: Vec<String> = parts.iter().map(Modulus::describe).collect();
                format!("max({})", inner.join(", "))
            }
        }
    }
}

/// The capped log-power modulus: `0` at `0`, `r^theta |ln r|` on
/// `(0, e^(-1/theta)]`, constant at its maximum beyond. The cap point is
/// the maximizer, so the function is nondecreasing and concave.
pub fn omega_theta(theta: f64, r: f64) -> Result<f64> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::invalid(format!("theta must lie in (0, 1], got {theta}")));
    }
    if !(r >= 0.0) {
        return Err(Error::invalid(format!("r must be nonnegative, got {r}")));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let r_theta = (-1.0 / theta).exp();
    let t = r.min(r_theta);
    Ok(t.powf(theta) * t.ln().abs())
}

fn require_strong(flag: bool, what: &str) -> Result<()> {
    if flag {
        Ok(())
    } else {
        Err(Error::Hypothesis(format!(
            "{what} needs the strong upper regularity hypothesis"
        )))
    }
}

/// Modulus of the solution gained through the operator from a class
/// `(s1, s2, s3)` kernel, branching on `s2` against the homogeneity.
pub fn modulus_varpi(
    s1: f64,
    s2: f64,
    s3: f64,
    upsilon: f64,
    strong_regular: bool,
) -> Result<Modulus> {
    if !(upsilon > 0.0) || !upsilon.is_finite() {
        return Err(Error::invalid(format!("upsilon must be positive, got {upsilon}")));
    }
    let s1_lo = (upsilon - 1.0).max(0.0);
    if !(s1 >= s1_lo && s1 < upsilon) {
        return Err(Error::invalid(format!(
            "s1 must lie in [max(0, upsilon - 1), upsilon) = [{s1_lo}, {upsilon}), got {s1}"
        )));
    }
    if !(s3 > 0.0 && s3 <= 1.0) {
        return Err(Error::invalid(format!("s3 must lie in (0, 1], got {s3}")));
    }
    if !(s2 >= 0.0) {
        return Err(Error::invalid(format!("s2 must be nonnegative, got {s2}")));
    }
    if s2 > upsilon && !(s2 < upsilon + s3) {
        return Err(Error::invalid(format!(
            "supercritical s2 must satisfy s2 < upsilon + s3, got {s2} >= {}",
            upsilon + s3
        )));
    }
    if s2 < upsilon {
        Modulus::power((upsilon - s1).min(s3))
    } else if s2 == upsilon {
        require_strong(strong_regular, "the borderline s2 = upsilon")?;
        Modulus::max_of(vec![Modulus::power(upsilon - s1)?, Modulus::log_power(s3)?])
    } else {
        Modulus::power((upsilon - s1).min(s3 + upsilon - s2))
    }
}

/// Improved modulus available when the operator's action on the constant
/// function is itself Hölder with exponent gain `beta`: the denominator
/// exponent relaxes to `s2 - beta` and the power branch gains `beta`.
pub fn modulus_omega(
    s1: f64,
    s2: f64,
    s3: f64,
    beta: f64,
    upsilon: f64,
    strong_regular: bool,
) -> Result<Modulus> {
    if !(upsilon > 0.0) || !upsilon.is_finite() {
        return Err(Error::invalid(format!("upsilon must be positive, got {upsilon}")));
    }
    if !(s1 >= 0.0 && s1 < upsilon) {
        return Err(Error::invalid(format!("s1 must lie in [0, upsilon), got {s1}")));
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::invalid(format!("beta must lie in (0, 1], got {beta}")));
    }
    if !(s2 >= beta) {
        return Err(Error::invalid(format!("s2 must be at least beta = {beta}, got {s2}")));
    }
    if !(s3 > 0.0 && s3 <= 1.0) {
        return Err(Error::invalid(format!("s3 must lie in (0, 1], got {s3}")));
    }
    let shifted = s2 - beta;
    if shifted > upsilon && !(s3 + upsilon - shifted > 0.0) {
        return Err(Error::invalid(format!(
            "supercritical s2 - beta must satisfy s3 + upsilon - (s2 - beta) > 0, got {}",
            s3 + upsilon - shifted
        )));
    }
    if shifted < upsilon {
        Modulus::power((upsilon - s1 + beta).min(s3))
    } else if shifted == upsilon {
        require_strong(strong_regular, "the borderline s2 - beta = upsilon")?;
        Modulus::max_of(vec![Modulus::power(upsilon - s1 + beta)?, Modulus::log_power(s3)?])
    } else {
        Modulus::power((upsilon - s1 + beta).min(s3 + upsilon - shifted))
    }
}

/// Structural checks on a modulus plus the measured dilation sup-ratio
/// `sup omega(a t) / (a omega(t))` over a log grid of `a >= 1`.
#[derive(Debug, Clone)]
pub struct ModulusCheckReport {
    pub zero_at_zero: bool,
    pub positive: bool,
    pub nondecreasing: bool,
    pub sup_ratio: f64,
    /// For each dilation factor `a`, the sup of the ratio over the grid.
    pub ratio_by_a: Vec<(f64, f64)>,
    pub passed: bool,
}

/// Dilation factors `a` spanning `[1, 10^4]`, eight per decade.
pub fn dilation_grid() -> Vec<f64> {
    let mut grid = Vec::with_capacity(33);
    for k in 0..=32 {
        grid.push(10f64.powf(k as f64 / 8.0));
    }
    grid
}

/// Log-spaced argument grid for modulus checks.
pub fn default_argument_grid(t_lo: f64, t_hi: f64) -> Vec<f64> {
    let (lo, hi) = (t_lo.max(1e-12), t_hi.max(t_lo * 2.0));
    let steps = 64usize;
    let ratio = (hi / lo).powf(1.0 / steps as f64);
    let mut grid = Vec::with_capacity(steps + 1);
    let mut t = lo;
    for _ in 0..=steps {
        grid.push(t);
        t *= ratio;
    }
    grid
}

/// The sup-ratio above this is treated as "effectively unbounded" on the
/// finite grid; admissible moduli measure close to 1.
pub const MODULUS_RATIO_CEILING: f64 = 10.0;

/// Verifies the modulus axioms on a grid: vanishing at zero, positivity,
/// monotonicity, and a bounded dilation ratio.
pub fn check_modulus_conditions(modulus: &Modulus, grid: &[f64]) -> Result<ModulusCheckReport> {
    if grid.is_empty() {
        return Err(Error::invalid("modulus check needs a nonempty grid"));
    }
    let mut sorted: Vec<f64> = grid.iter().copied().filter(|t| t.is_finite() && *t > 0.0).collect();
    if sorted.is_empty() {
        return Err(Error::invalid("modulus check grid has no positive points"));
    }
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("filtered finite"));

    let zero_at_zero = modulus.eval(0.0) == 0.0;
    let mut positive = true;
    let mut nondecreasing = true;
    let mut prev = 0.0f64;
    for &t in &sorted {
        let v = modulus.eval(t);
        if !(v > 0.0) {
            positive = false;
        }
        if v < prev {
            nondecreasing = false;
        }
        prev = v;
    }

    let mut sup_ratio = 0.0f64;
    let mut ratio_by_a = Vec::new();
    for a in dilation_grid() {
        let mut sup_a = 0.0f64;
        for &t in &sorted {
            let denom = a * modulus.eval(t);
            if denom > 0.0 {
                sup_a = sup_a.max(modulus.eval(a * t) / denom);
            }
        }
        sup_ratio = sup_ratio.max(sup_a);
        ratio_by_a.push((a, sup_a));
    }

    let passed = zero_at_zero
        && positive
        && nondecreasing
        && sup_ratio.is_finite()
        && sup_ratio <= MODULUS_RATIO_CEILING;
    Ok(ModulusCheckReport { zero_at_zero, positive, nondecreasing, sup_ratio, ratio_by_a, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn case_of(
        s1: f64,
        s2p: f64,
        s2pp: f64,
        s3: f64,
        t1: f64,
        upsilon: f64,
    ) -> ComposedClass {
        let class = KernelClass::new(s1, s2p + s2pp, s3, upsilon).unwrap();
        compose_general(&class, s2p, s2pp, t1, true).unwrap()
    }

    #[test]
    fn compose_potential_branches() {
        match compose_potential_classes(0.3, 0.3, 1.0).unwrap() {
            PotentialComposition::Potential { exponent } => {
                assert!((exponent - 0.4).abs() <= 1e-15)
            }
            other => panic!("wrong branch {other:?}"),
        }
        assert_eq!(
            compose_potential_classes(0.5, 0.5, 1.0).unwrap(),
            PotentialComposition::BoundedWithLog
        );
        assert_eq!(
            compose_potential_classes(0.6, 0.6, 1.0).unwrap(),
            PotentialComposition::BoundedContinuous
        );
        assert!(compose_potential_classes(0.0, 0.5, 1.0).is_err());
        assert!(compose_potential_classes(1.5, 0.5, 1.0).is_err());
    }

    #[test]
    fn nine_cases_golden_table() {
        // One hand-checked input per case, upsilon = 1 throughout; the
        // equality rows and columns are exact in binary floating point.
        let out = case_of(0.2, 0.4, 0.3, 0.5, 0.3, 1.0);
        assert_eq!(out.case, CompositionCase::I);
        assert_eq!((out.class.s1, out.class.s2, out.class.s3), (0.0, 0.3, 0.2));
        assert!(!out.class.eps_slack && !out.strong_hypothesis_used);

        let out = case_of(0.25, 0.5, 0.0, 0.5, 0.5, 1.0);
        assert_eq!(out.case, CompositionCase::II);
        assert_eq!((out.class.s1, out.class.s2, out.class.s3), (0.0, 0.5, 0.5));
        assert!(out.class.eps_slack && out.strong_hypothesis_used);

        let out = case_of(0.25, 0.75, 0.0, 1.0, 0.5, 1.0);
        assert_eq!(out.case, CompositionCase::III);
        assert_eq!((out.class.s1, out.class.s2, out.class.s3), (0.0, 0.5, 0.5));
        assert!(!out.class.eps_slack);

        let out = case_of(0.5, 0.25, 0.25, 1.0, 0.5, 1.0);
        assert_eq!(out.case, CompositionCase::IV);
        assert_eq!(
            (out.class.s1, out.class.s2, out.class.s3),
            (EPS_DEFAULT, 0.5, 0.5)
        );
        assert!(out.class.eps_slack && out.strong_hypothesis_used);

        let out = case_of(0.4, 0.4, 0.0, 0.3, 0.6, 1.0);
        assert_eq!(out.case, CompositionCase::V);
        assert_eq!(
            (out.class.s1, out.class.s2, out.class.s3),
            (EPS_DEFAULT, 0.6, 0.3)
        );
        assert!(out.class.eps_slack);

        let out = case_of(0.5, 0.75, 0.0, 0.5, 0.5, 1.0);
        assert_eq!(out.case, CompositionCase::VI);
        assert_eq!(
            (out.class.s1, out.class.s2, out.class.s3),
            (EPS_DEFAULT, 0.5, 0.5)
        );
        assert!(out.class.eps_slack);

        let out = case_of(0.75, 0.25, 0.0, 0.5, 0.5, 1.0);
        assert_eq!(out.case, CompositionCase::VII);
        assert_eq!((out.class.s1, out.class.s2, out.class.s3), (0.25, 0.75, 0.25));
        assert!(!out.class.eps_slack && !out.strong_hypothesis_used);

        let out = case_of(0.75, 0.5, 0.0, 0.5, 0.5, 1.0);
        assert_eq!(out.case, CompositionCase::VIII);
        assert_eq!((out.class.s1, out.class.s2, out.class.s3), (0.25, 0.75, 0.25));
        assert!(out.class.eps_slack && out.strong_hypothesis_used);

        let out = case_of(0.6, 0.8, 0.2, 1.0, 0.6, 1.0);
        assert_eq!(out.case, CompositionCase::IX);
        assert!((out.class.s1 - 0.2).abs() <= 1e-15);
        assert_eq!(out.class.s2, 0.6);
        assert_eq!(out.class.s3, 0.4);
        assert!(!out.class.eps_slack && !out.strong_hypothesis_used);
    }

    #[test]
    fn borderline_composition_requires_strong_regularity() {
        let class = KernelClass::new(0.4, 0.4, 0.3, 1.0).unwrap();
        match compose_general(&class, 0.4, 0.0, 0.6, false) {
            Err(Error::Hypothesis(msg)) => assert!(msg.contains("strong")),
            other => panic!("expected hypothesis error, got {other:?}"),
        }
    }

    #[test]
    fn compose_rejects_bad_exponents() {
        let class = KernelClass::new(0.2, 0.7, 0.5, 1.0).unwrap();
        // s2'' beyond s3.
        assert!(compose_general(&class, 0.1, 0.6, 0.3, true).is_err());
        // Split does not sum to s2.
        assert!(compose_general(&class, 0.1, 0.1, 0.3, true).is_err());
        // t1 out of range.
        assert!(compose_general(&class, 0.4, 0.3, 1.0, true).is_err());
        // s3 = 0 is rejected at class construction.
        assert!(KernelClass::new(0.2, 0.7, 0.0, 1.0).is_err());
    }

    #[test]
    fn suggested_split_maximizes_third_exponent() {
        // s2 < upsilon: taking s2'' = 0 is optimal.
        let class = KernelClass::new(0.2, 0.7, 0.5, 1.0).unwrap();
        let (s2p, s2pp) = suggest_split(&class, 0.3).unwrap();
        assert_eq!(s2pp, 0.0);
        assert_eq!(s2p, 0.7);
        // s2 >= upsilon forces s2'' > s2 - upsilon to keep s2' < upsilon.
        let class = KernelClass::new(0.6, 1.2, 1.0, 1.0).unwrap();
        let (s2p, s2pp) = suggest_split(&class, 0.6).unwrap();
        assert!(s2p < 1.0 && s2pp >= 0.2 - 1e-9);
        let out = compose_general(&class, s2p, s2pp, 0.6, true).unwrap();
        assert!(out.class.s3 > 0.0);
    }

    #[test]
    fn smoothing_order_table() {
        for (s, upsilon, want) in [
            (0.0, 1.0, 2u32),
            (0.5, 1.0, 3),
            (0.6, 1.0, 3),
            (0.75, 1.0, 5),
            (1.0, 2.0, 3),
        ] {
            assert_eq!(smoothing_order(s, upsilon).unwrap(), want, "s={s} upsilon={upsilon}");
        }
        assert!(smoothing_order(1.0, 1.0).is_err());
        assert!(smoothing_order(-0.1, 1.0).is_err());
    }

    #[test]
    fn smoothing_order_monotone_on_grid() {
        let mut prev = 0u32;
        for k in 0..20 {
            let s = k as f64 * 0.05;
            let r = smoothing_order(s, 1.0).unwrap();
            assert!(r >= prev, "s={s}: {r} < {prev}");
            prev = r;
        }
    }

    #[test]
    fn omega_theta_golden_values() {
        let e_inv = (-1.0f64).exp();
        assert!((omega_theta(1.0, e_inv).unwrap() - e_inv).abs() <= 1e-15);
        assert!((omega_theta(1.0, 0.9).unwrap() - e_inv).abs() <= 1e-15);
        let v = omega_theta(0.5, (-2.0f64).exp()).unwrap();
        assert!((v - 2.0 * e_inv).abs() <= 1e-15);
        assert_eq!(omega_theta(0.7, 0.0).unwrap(), 0.0);
        assert!(omega_theta(0.0, 0.5).is_err());
        assert!(omega_theta(1.5, 0.5).is_err());
    }

    #[test]
    fn varpi_branches() {
        assert_eq!(
            modulus_varpi(0.5, 0.8, 1.0, 1.0, false).unwrap(),
            Modulus::Power { beta: 0.5 }
        );
        // Ambient surface case, subcritical exponent.
        assert_eq!(
            modulus_varpi(1.5, 2.5, 1.0, 2.0, false).unwrap(),
            Modulus::Power { beta: 0.5 }
        );
        // Borderline: log-power appears and the strong hypothesis is consumed.
        let m = modulus_varpi(1.0, 2.0, 1.0, 2.0, true).unwrap();
        assert_eq!(
            m,
            Modulus::MaxOf(vec![Modulus::Power { beta: 1.0 }, Modulus::LogPower { theta: 1.0 }])
        );
        assert!(matches!(modulus_varpi(1.0, 2.0, 1.0, 2.0, false), Err(Error::Hypothesis(_))));
        // Supercritical s2 too large.
        assert!(modulus_varpi(0.5, 2.1, 1.0, 1.0, false).is_err());
        // s1 below the admissible window.
        assert!(modulus_varpi(0.5, 1.5, 1.0, 2.0, false).is_err());
    }

    #[test]
    fn omega_branches() {
        assert_eq!(
            modulus_omega(0.5, 1.0, 1.0, 0.5, 1.0, false).unwrap(),
            Modulus::Power { beta: 1.0 }
        );
        let m = modulus_omega(0.5, 1.5, 0.5, 0.5, 1.0, true).unwrap();
        assert_eq!(
            m,
            Modulus::MaxOf(vec![Modulus::Power { beta: 1.0 }, Modulus::LogPower { theta: 0.5 }])
        );
        assert!(matches!(
            modulus_omega(0.5, 1.5, 0.5, 0.5, 1.0, false),
            Err(Error::Hypothesis(_))
        ));
        assert_eq!(
            modulus_omega(0.2, 1.7, 1.0, 0.2, 1.0, false).unwrap(),
            Modulus::Power { beta: 0.5 }
        );
        assert!(modulus_omega(0.2, 0.1, 1.0, 0.2, 1.0, false).is_err());
    }

    #[test]
    fn improvement_over_varpi_in_the_power_branch() {
        // With beta = s3 the improved modulus strictly dominates in the
        // first branch: min{upsilon - s1 + beta, s3} >= min{upsilon - s1, s3}.
        let base = modulus_varpi(0.5, 0.8, 0.5, 1.0, false).unwrap();
        let improved = modulus_omega(0.5, 0.8, 0.5, 0.5, 1.0, false).unwrap();
        let (Modulus::Power { beta: b0 }, Modulus::Power { beta: b1 }) = (&base, &improved)
        else {
            panic!("expected power branches");
        };
        assert!(b1 >= b0);
        for r in [0.01, 0.1, 0.5] {
            assert!(improved.eval(r) <= base.eval(r) + 1e-15);
        }
    }

    #[test]
    fn modulus_description_syntax() {
        assert_eq!(Modulus::power(0.5).unwrap().describe(), "r^0.5");
        let lp = Modulus::log_power(1.0).unwrap().describe();
        assert!(lp.starts_with("omega_theta(1;"), "{lp}");
        let m = Modulus::max_of(vec![
            Modulus::power(1.0).unwrap(),
            Modulus::log_power(0.5).unwrap(),
        ])
        .unwrap();
        assert!(m.describe().starts_with("max(r^1, omega_theta(0.5"));
    }

    #[test]
    fn condition_check_accepts_admissible_moduli() {
        let grid = default_argument_grid(1e-6, 2.0);
        for m in [
            Modulus::power(0.5).unwrap(),
            Modulus::power(1.0).unwrap(),
            Modulus::log_power(1.0).unwrap(),
            Modulus::log_power(0.3).unwrap(),
            Modulus::max_of(vec![
                Modulus::power(0.5).unwrap(),
                Modulus::log_power(0.5).unwrap(),
            ])
            .unwrap(),
        ] {
            let report = check_modulus_conditions(&m, &grid).unwrap();
            assert!(report.passed, "{} -> {report:?}", m.describe());
            assert!(report.sup_ratio <= 1.0 + 1e-9, "{}", m.describe());
        }
    }

    #[test]
    fn condition_check_rejects_superlinear_power() {
        let grid = default_argument_grid(1e-6, 2.0);
        let report =
            check_modulus_conditions(&Modulus::power(2.0).unwrap(), &grid).unwrap();
        assert!(!report.passed);
        // The measured ratio grows linearly with the dilation factor.
        let (a_last, r_last) = *report.ratio_by_a.last().unwrap();
        let (a_mid, r_mid) = report.ratio_by_a[16];
        let growth = (r_last / r_mid) / (a_last / a_mid);
        assert!((growth - 1.0).abs() < 0.2, "growth {growth}");
    }

    #[test]
    fn produced_moduli_always_pass_the_condition_check() {
        let grid = default_argument_grid(1e-6, 2.0);
        let cases = [
            modulus_varpi(0.5, 0.8, 1.0, 1.0, false).unwrap(),
            modulus_varpi(1.0, 2.0, 1.0, 2.0, true).unwrap(),
            modulus_varpi(0.25, 1.4, 0.5, 1.0, false).unwrap(),
            modulus_omega(0.5, 1.0, 1.0, 0.5, 1.0, false).unwrap(),
            modulus_omega(0.5, 1.5, 0.5, 0.5, 1.0, true).unwrap(),
            modulus_omega(0.2, 1.7, 1.0, 0.2, 1.0, false).unwrap(),
        ];
        for m in cases {
            assert!(
                check_modulus_conditions(&m, &grid).unwrap().passed,
                "{}",
                m.describe()
            );
        }
    }

    #[test]
    fn class_spec_round_trip() {
        let c = KernelClass::parse("class:0.6,1.0,1@1").unwrap();
        assert_eq!((c.s1, c.s2, c.s3, c.upsilon), (0.6, 1.0, 1.0, 1.0));
        assert_eq!(KernelClass::parse(&c.describe()).unwrap(), c);
        assert_eq!(parse_split("split:0.8,0.2").unwrap(), (0.8, 0.2));
        for bad in ["class:1,2@1", "class:a,b,c@1", "class:0.2,0.7,0.5", "split:1"] {
            assert!(
                KernelClass::parse(bad).is_err() && parse_split(bad).is_err(),
                "accepted `{bad}`"
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(512))]

        #[test]
        fn dispatch_is_total_and_exclusive(
            upsilon in 0.5f64..3.0,
            s1_frac in 0.0f64..0.999,
            t1_frac in 0.0f64..0.999,
            s3 in 0.01f64..1.0,
            s2pp_frac in 0.0f64..1.0,
            s2p_frac in 0.0f64..0.999,
        ) {
            let s1 = s1_frac * upsilon;
            let t1 = t1_frac * upsilon;
            let s2pp = s2pp_frac * s3;
            let s2p = s2p_frac * upsilon;
            let class = KernelClass::new(s1, s2p + s2pp, s3, upsilon).unwrap();
            let out = compose_general(&class, s2p, s2pp, t1, true).unwrap();

            // Recompute the dispatch keys and check exactly one case fires.
            let row = (s1 + t1).partial_cmp(&upsilon).unwrap();
            let col = (s2p + t1).partial_cmp(&upsilon).unwrap();
            prop_assert_eq!(out.case, CompositionCase::from_signs(row, col));

            // Min-structure of the third exponent.
            let third = out.class.s3;
            prop_assert!(third <= s3 - s2pp + 1e-12);
            prop_assert!(third <= upsilon - s1 + 1e-12);
            prop_assert!(third <= upsilon - t1 + 1e-12);

            // Second exponent dominates both inputs' potential exponents.
            prop_assert!(out.class.s2 >= s1.max(t1) - 1e-12);
        }

        #[test]
        fn smoothing_order_satisfies_descent_bound(
            upsilon in 0.5f64..3.0,
            s_frac in 0.0f64..0.999,
        ) {
            let s = s_frac * upsilon;
            let r = smoothing_order(s, upsilon).unwrap();
            prop_assert!(r >= 2);
            let gain = upsilon - s;
            prop_assert!(((r - 1) as f64) * gain <= upsilon + gain + 1e-12);
        }
    }
}
