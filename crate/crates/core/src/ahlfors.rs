//! Upper Ahlfors regularity estimation and the integral bounds it implies.
//!
//! A sampling is upper `upsilon`-Ahlfors regular (with constant `c`) when
//! `measure(B(x, r)) <= c * r^upsilon` for all centers and radii below a
//! cutoff; the strong variant bounds annuli by `c * (r2^upsilon -
//! r1^upsilon)`. Balls are open (`d < r`), so `B(x, 0)` is empty, and a ball
//! always carries its center's weight.
//!
//! On top of the two constant estimators this module verifies the classical
//! consequences for weakly singular integrals: the whole-set bound
//! `sup_x sum_y w_y d(x,y)^-s <= measure * a^-s + c * upsilon/(upsilon-s) *
//! a^(upsilon-s)`, the localized ball/complement bounds with their scale
//! normalizations, the three-case bound for the composite integral
//! `sum_y w_y d(x,y)^-s1 d(y,z)^-s2`, and the small-set modulus (the worst
//! weakly singular integral over a nearest-first set of given mass).
//!
//! Diagonal terms are always dropped from singular sums: the sampled measure
//! gives single points mass only through their quadrature weight, and the
//! continuum object assigns the diagonal no mass.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::map_indexed;
use crate::space::SampledMeasureSpace;

/// Which integral bound a [`RieszBoundReport`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// Whole-set weakly singular integral, split at radius `a`.
    Whole,
    /// `t^(s-upsilon) * integral over B(x,t)` for `s < upsilon`.
    Ball,
    /// `t^(s-upsilon) * integral over the complement` for `s > upsilon`.
    ComplementPower,
    /// `|ln t|^-1 * integral over the complement` at `s = upsilon`,
    /// scales below `1/e`.
    ComplementLog,
    /// Composite integral with two singular factors, three-case shape.
    Composite,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Whole => "whole",
            BoundKind::Ball => "ball",
            BoundKind::ComplementPower => "complement_power",
            BoundKind::ComplementLog => "complement_log",
            BoundKind::Composite => "composite",
        }
    }
}

/// One offending (center, radius) combination of an estimator.
#[derive(Debug, Clone, Copy)]
pub struct WorstPair {
    pub node: usize,
    /// Inner annulus radius; `None` for plain balls.
    pub inner_radius: Option<f64>,
    pub radius: f64,
    pub ratio: f64,
}

/// Result of an Ahlfors constant estimation.
#[derive(Debug, Clone)]
pub struct AhlforsReport {
    pub upsilon: f64,
    /// Largest radius the estimate looked at.
    pub r_cutoff: f64,
    /// Estimated upper regularity constant: `sup ball / r^upsilon`.
    pub c_upper: f64,
    /// Estimated strong constant (annuli), when requested.
    pub c_strong: Option<f64>,
    /// Top offending combinations, sorted by decreasing ratio.
    pub worst_pairs: Vec<WorstPair>,
    /// Ceiling the constant was checked against, if any.
    pub ceiling: Option<f64>,
    /// True when no ceiling was given or the relevant constant stays below it.
    pub passed: bool,
}

/// Result of one integral-bound verification.
#[derive(Debug, Clone)]
pub struct RieszBoundReport {
    pub s: f64,
    pub kind: BoundKind,
    /// Measured supremum of the normalized integral.
    pub measured_sup: f64,
    /// Closed-form bound when the kind has one.
    pub bound_value: Option<f64>,
    /// Per-scale suprema `(scale, sup)`; for the composite kind the scale is
    /// a pair-distance bin edge.
    pub ratio_by_scale: Vec<(f64, f64)>,
    pub passed: bool,
}

/// Pair selection for [`composite_integral_check`].
#[derive(Debug, Clone, Copy)]
pub enum PairSample {
    /// Every ordered pair `(x, z)`, `x != z`.
    All,
    /// `count` ordered pairs drawn with a seeded generator.
    Random { count: usize, seed: u64 },
}

const WORST_PAIRS_KEPT: usize = 10;

/// Mass of the open ball `B(center, r)`: sum of weights at distance `< r`.
/// The center's own weight is included as soon as `r > 0`.
pub fn ball_measure(space: &SampledMeasureSpace, center: usize, r: f64) -> f64 {
    let row = space.dist_row(center);
    let mut sum = 0.0;
    for (j, &d) in row.iter().enumerate() {
        if d < r {
            sum += space.weight(j);
        }
    }
    sum
}

/// Mass of the half-open annulus `r1 <= d < r2`. Needs `0 <= r1 < r2`.
pub fn annulus_measure(
    space: &SampledMeasureSpace,
    center: usize,
    r1: f64,
    r2: f64,
) -> Result<f64> {
    if !(r1 >= 0.0) || !(r1 < r2) {
        return Err(Error::invalid(format!("annulus needs 0 <= r1 < r2, got [{r1}, {r2})")));
    }
    let row = space.dist_row(center);
    let mut sum = 0.0;
    for (j, &d) in row.iter().enumerate() {
        if d >= r1 && d < r2 {
            sum += space.weight(j);
        }
    }
    Ok(sum)
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid("radius grid is empty"));
    }
    for &r in grid {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::invalid(format!("radius {r} is not positive and finite")));
        }
    }
    Ok(())
}

fn resolve_centers<'a>(
    space: &SampledMeasureSpace,
    centers: Option<&'a [usize]>,
) -> Result<Vec<usize>> {
    match centers {
        None => Ok((0..space.n()).collect()),
        Some(list) => {
            if list.is_empty() {
                return Err(Error::invalid("center list is empty"));
            }
            for &c in list {
                if c >= space.n() {
                    return Err(Error::invalid(format!(
                        "center {c} out of range for {} points",
                        space.n()
                    )));
                }
            }
            Ok(list.to_vec())
        }
    }
}

fn finish_report(
    upsilon: f64,
    r_cutoff: f64,
    c_upper: f64,
    c_strong: Option<f64>,
    mut pairs: Vec<WorstPair>,
    ceiling: Option<f64>,
) -> AhlforsReport {
    pairs.sort_by(|a, b| {
        b.ratio
            .partial_cmp(&a.ratio)
            .unwrap()
            .then(a.node.cmp(&b.node))
            .then(a.radius.partial_cmp(&b.radius).unwrap())
    });
    pairs.truncate(WORST_PAIRS_KEPT);
    let checked = c_strong.unwrap_or(c_upper);
    let passed = ceiling.map_or(true, |cap| checked <= cap);
    AhlforsReport { upsilon, r_cutoff, c_upper, c_strong, worst_pairs: pairs, ceiling, passed }
}

/// Estimates the upper Ahlfors constant `sup ball_measure / r^upsilon` over
/// the given centers (all nodes when `None`) and radius grid.
pub fn estimate_upper_ahlfors(
    space: &SampledMeasureSpace,
    upsilon: f64,
    radius_grid: &[f64],
    centers: Option<&[usize]>,
    ceiling: Option<f64>,
) -> Result<AhlforsReport> {
    if !(upsilon > 0.0) || !upsilon.is_finite() {
        return Err(Error::invalid(format!("upsilon must be positive, got {upsilon}")));
    }
    validate_grid(radius_grid)?;
    let centers = resolve_centers(space, centers)?;

    let per_center: Vec<Vec<WorstPair>> = map_indexed(centers.len(), |ci| {
        let node = centers[ci];
        radius_grid
            .iter()
            .map(|&r| WorstPair {
                node,
                inner_radius: None,
                radius: r,
                ratio: ball_measure(space, node, r) / r.powf(upsilon),
            })
            .collect()
    });

    let mut pairs: Vec<WorstPair> = per_center.into_iter().flatten().collect();
    let c_upper = pairs.iter().map(|p| p.ratio).fold(0.0f64, f64::max);
    let r_cutoff = radius_grid.iter().cloned().fold(0.0f64, f64::max);
    pairs.retain(|p| p.ratio > 0.0);
    Ok(finish_report(upsilon, r_cutoff, c_upper, None, pairs, ceiling))
}

/// Estimates the strong upper Ahlfors constant over annuli
/// `(r1, r2)` with `r1 < r2` drawn from `{0} + grid`, and the plain upper
/// constant alongside (annuli with `r1 = 0` are balls).
pub fn estimate_strong_upper_ahlfors(
    space: &SampledMeasureSpace,
    upsilon: f64,
    radius_grid: &[f64],
    centers: Option<&[usize]>,
    ceiling: Option<f64>,
) -> Result<AhlforsReport> {
    if !(upsilon > 0.0) || !upsilon.is_finite() {
        return Err(Error::invalid(format!("upsilon must be positive, got {upsilon}")));
    }
    validate_grid(radius_grid)?;
    let centers = resolve_centers(space, centers)?;

    let mut sorted = radius_grid.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    sorted.dedup();
    let mut inner: Vec<f64> = vec![0.0];
    inner.extend(&sorted);

    let per_center: Vec<Vec<WorstPair>> = map_indexed(centers.len(), |ci| {
        let node = centers[ci];
        let mut local = Vec::new();
        for &r2 in &sorted {
            let hi = r2.powf(upsilon);
            for &r1 in inner.iter().take_while(|&&r1| r1 < r2) {
                let lo = if r1 == 0.0 { 0.0 } else { r1.powf(upsilon) };
                let denom = hi - lo;
                if denom <= 0.0 {
                    continue;
                }
                let mass = annulus_measure(space, node, r1, r2).expect("validated radii");
                local.push(WorstPair {
                    node,
                    inner_radius: if r1 == 0.0 { None } else { Some(r1) },
                    radius: r2,
                    ratio: mass / denom,
                });
            }
        }
        local
    });

    let mut pairs: Vec<WorstPair> = per_center.into_iter().flatten().collect();
    let c_strong = pairs.iter().map(|p| p.ratio).fold(0.0f64, f64::max);
    let c_upper = pairs
        .iter()
        .filter(|p| p.inner_radius.is_none())
        .map(|p| p.ratio)
        .fold(0.0f64, f64::max);
    let r_cutoff = sorted.last().copied().unwrap_or(0.0);
    pairs.retain(|p| p.ratio > 0.0);
    Ok(finish_report(upsilon, r_cutoff, c_upper, Some(c_strong), pairs, ceiling))
}

/// Weakly singular integral `sum_{j != x} w_j d(x, j)^-s` with the diagonal
/// dropped. Zero-weight nodes are skipped, so coincident points with no mass
/// cannot poison the sum.
pub fn riesz_integral(space: &SampledMeasureSpace, x: usize, s: f64) -> f64 {
    let row = space.dist_row(x);
    let mut sum = 0.0;
    for (j, &d) in row.iter().enumerate() {
        if j == x {
            continue;
        }
        let w = space.weight(j);
        if w == 0.0 {
            continue;
        }
        sum += w * d.powf(-s);
    }
    sum
}

fn sup_riesz(space: &SampledMeasureSpace, s: f64) -> f64 {
    map_indexed(space.n(), |x| riesz_integral(space, x, s))
        .into_iter()
        .fold(0.0f64, f64::max)
}

/// Verifies the whole-set bound implied by upper regularity: for
/// `0 <= s < upsilon` and a split radius `0 < a <= diameter`,
///
/// `sup_x riesz_integral(x, s) <= measure * a^-s + c_upper *
/// upsilon/(upsilon-s) * a^(upsilon-s)`.
///
/// At `s = 0` the bound degenerates to the total mass.
pub fn verify_ball_bound(
    space: &SampledMeasureSpace,
    upsilon: f64,
    s: f64,
    a: f64,
    c_upper: f64,
) -> Result<RieszBoundReport> {
    if !(upsilon > 0.0) {
        return Err(Error::invalid(format!("upsilon must be positive, got {upsilon}")));
    }
    if !(s >= 0.0) || s >= upsilon {
        return Err(Error::invalid(format!("need 0 <= s < upsilon, got s = {s}, upsilon = {upsilon}")));
    }
    if !(a > 0.0) || a > space.diameter() {
        return Err(Error::invalid(format!(
            "split radius must lie in (0, diameter], got {a} with diameter {}",
            space.diameter()
        )));
    }
    if !(c_upper >= 0.0) || !c_upper.is_finite() {
        return Err(Error::invalid(format!("c_upper must be finite and nonnegative, got {c_upper}")));
    }

    let measured_sup = sup_riesz(space, s);
    let bound_value = if s == 0.0 {
        space.total_mass()
    } else {
        space.total_mass() * a.powf(-s) + c_upper * (upsilon / (upsilon - s)) * a.powf(upsilon - s)
    };
    let passed = measured_sup <= bound_value;
    Ok(RieszBoundReport {
        s,
        kind: BoundKind::Whole,
        measured_sup,
        bound_value: Some(bound_value),
        ratio_by_scale: vec![(a, measured_sup / bound_value)],
        passed,
    })
}

/// Verifies the localized bounds; the kind is selected by `s` against
/// `upsilon`:
///
/// - `s < upsilon`: ball kind, `t^(s-upsilon) * sum over 0 < d < t`,
/// - `s > upsilon`: complement power kind, `t^(s-upsilon) * sum over d >= t`,
/// - `s = upsilon`: complement log kind, `|ln t|^-1 * sum over d >= t`,
///   restricted to scales below `1/e`.
///
/// The report carries the per-scale suprema; finiteness is a statement about
/// the underlying set, so callers assess it by comparing refinements.
pub fn verify_localized_bounds(
    space: &SampledMeasureSpace,
    upsilon: f64,
    s: f64,
    scales: &[f64],
) -> Result<RieszBoundReport> {
    if !(upsilon > 0.0) {
        return Err(Error::invalid(format!("upsilon must be positive, got {upsilon}")));
    }
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::invalid(format!("exponent must be finite and nonnegative, got {s}")));
    }
    validate_grid(scales)?;

    let kind = if s < upsilon {
        BoundKind::Ball
    } else if s > upsilon {
        BoundKind::ComplementPower
    } else {
        BoundKind::ComplementLog
    };

    let scales: Vec<f64> = match kind {
        BoundKind::ComplementLog => {
            let kept: Vec<f64> = scales.iter().cloned().filter(|&t| t < (-1.0f64).exp()).collect();
            if kept.is_empty() {
                return Err(Error::invalid(
                    "the complement-log kind needs at least one scale below 1/e",
                ));
            }
            kept
        }
        _ => scales.to_vec(),
    };

    let per_scale: Vec<(f64, f64)> = scales
        .iter()
        .map(|&t| {
            let sup = map_indexed(space.n(), |x| {
                let row = space.dist_row(x);
                let mut sum = 0.0;
                for (j, &d) in row.iter().enumerate() {
                    if j == x || space.weight(j) == 0.0 {
                        continue;
                    }
                    let included = match kind {
                        BoundKind::Ball => d > 0.0 && d < t,
                        _ => d >= t,
                    };
                    if included {
                        sum += space.weight(j) * d.powf(-s);
                    }
                }
                match kind {
                    BoundKind::Ball | BoundKind::ComplementPower => t.powf(s - upsilon) * sum,
                    _ => sum / t.ln().abs(),
                }
            })
            .into_iter()
            .fold(0.0f64, f64::max);
            (t, sup)
        })
        .collect();

    let measured_sup = per_scale.iter().map(|&(_, v)| v).fold(0.0f64, f64::max);
    Ok(RieszBoundReport {
        s,
        kind,
        measured_sup,
        bound_value: None,
        ratio_by_scale: per_scale,
        passed: measured_sup.is_finite(),
    })
}

/// Checks the three-case shape of the composite integral
/// `I(x, z) = sum_y w_y d(x,y)^-s1 d(y,z)^-s2` (diagonal terms dropped):
/// the ratio of `I(x, z)` to
///
/// - `1 + d(x,z)^(upsilon-s1-s2)` when `s1 + s2 < upsilon`,
/// - `1 + |ln d(x,z)|` when `s1 + s2 = upsilon` (requires the caller to
///   assert strong regularity via `strong_hypothesis`),
/// - `d(x,z)^(upsilon-s1-s2)` when `s1 + s2 > upsilon`,
///
/// over sampled ordered pairs. The measured supremum estimates the constant.
pub fn composite_integral_check(
    space: &SampledMeasureSpace,
    upsilon: f64,
    s1: f64,
    s2: f64,
    sample: &PairSample,
    strong_hypothesis: bool,
) -> Result<RieszBoundReport> {
    if !(upsilon > 0.0) {
        return Err(Error::invalid(format!("upsilon must be positive, got {upsilon}")));
    }
    for (name, s) in [("s1", s1), ("s2", s2)] {
        if !(s >= 0.0) || s >= upsilon {
            return Err(Error::invalid(format!("need 0 <= {name} < upsilon, got {s}")));
        }
    }
    let ssum = s1 + s2;
    if ssum == upsilon && !strong_hypothesis {
        return Err(Error::invalid(
            "s1 + s2 = upsilon needs the strong upper Ahlfors hypothesis; \
             pass strong_hypothesis = true to assert it",
        ));
    }
    let n = space.n();
    if n < 3 {
        return Err(Error::invalid("composite integral check needs at least 3 points"));
    }

    // Factor matrices with zeroed diagonals: the y = x and y = z terms drop
    // out of the product automatically.
    let pow_matrix = |s: f64| -> Vec<f64> {
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m[i * n + j] = space.dist(i, j).powf(-s);
                }
            }
        }
        m
    };
    let d1 = pow_matrix(s1);
    let d2 = pow_matrix(s2);

    let pairs: Vec<(usize, usize)> = match *sample {
        PairSample::All => {
            let mut v = Vec::with_capacity(n * (n - 1));
            for x in 0..n {
                for z in 0..n {
                    if x != z {
                        v.push((x, z));
                    }
                }
            }
            v
        }
        PairSample::Random { count, seed } => {
            if count == 0 {
                return Err(Error::invalid("pair sample count must be positive"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut v = Vec::with_capacity(count);
            while v.len() < count {
                let x = rng.gen_range(0..n);
                let z = rng.gen_range(0..n);
                if x != z {
                    v.push((x, z));
                }
            }
            v
        }
    };

    let ratios: Vec<(f64, f64)> = map_indexed(pairs.len(), |p| {
        let (x, z) = pairs[p];
        let mut integral = 0.0;
        let rx = &d1[x * n..(x + 1) * n];
        for y in 0..n {
            let w = space.weight(y);
            if w == 0.0 {
                continue;
            }
            integral += w * rx[y] * d2[y * n + z];
        }
        let d = space.dist(x, z);
        let shape = if ssum < upsilon {
            1.0 + d.powf(upsilon - ssum)
        } else if ssum == upsilon {
            1.0 + d.ln().abs()
        } else {
            d.powf(upsilon - ssum)
        };
        (d, integral / shape)
    });

    let measured_sup = ratios.iter().map(|&(_, r)| r).fold(0.0f64, f64::max);

    // Scale profile: sup ratio per log-spaced pair-distance bin.
    let (dmin, dmax) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &(d, _)| {
        (lo.min(d), hi.max(d))
    });
    let bins = 12usize;
    let mut ratio_by_scale = Vec::new();
    if dmin > 0.0 && dmax > dmin {
        let step = (dmax / dmin).powf(1.0 / bins as f64);
        let mut edges = Vec::with_capacity(bins);
        let mut e = dmin;
        for _ in 0..bins {
            e *= step;
            edges.push(e);
        }
        edges[bins - 1] = dmax;
        let mut sups = vec![0.0f64; bins];
        for &(d, r) in &ratios {
            let mut k = 0;
            while k + 1 < bins && d > edges[k] {
                k += 1;
            }
            sups[k] = sups[k].max(r);
        }
        for (e, s) in edges.into_iter().zip(sups) {
            if s > 0.0 {
                ratio_by_scale.push((e, s));
            }
        }
    }

    Ok(RieszBoundReport {
        s: ssum,
        kind: BoundKind::Composite,
        measured_sup,
        bound_value: None,
        ratio_by_scale,
        passed: measured_sup.is_finite(),
    })
}

/// Worst weakly singular integral over a small set: for each center, nodes
/// are taken nearest-first until `mass_budget` is exhausted (the last node
/// fractionally), and `sum w * d^-s` is accumulated; the supremum over
/// centers is returned. Monotone in the budget and vanishing with it.
pub fn small_set_modulus(space: &SampledMeasureSpace, s: f64, mass_budget: f64) -> Result<f64> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::invalid(format!("exponent must be finite and nonnegative, got {s}")));
    }
    if !(mass_budget >= 0.0) || !mass_budget.is_finite() {
        return Err(Error::invalid(format!("mass budget must be finite and nonnegative, got {mass_budget}")));
    }
    if mass_budget == 0.0 {
        return Ok(0.0);
    }
    let budget = mass_budget.min(space.total_mass());

    let per_center = map_indexed(space.n(), |x| {
        let sorted = space.sorted_row(x);
        let mut remaining = budget;
        let mut value = 0.0;
        for (k, &(d, w)) in sorted.iter().enumerate() {
            if k == 0 && d == 0.0 {
                // The center pair itself; the diagonal carries no mass.
                continue;
            }
            if w == 0.0 {
                continue;
            }
            let take = w.min(remaining);
            value += take * d.powf(-s);
            remaining -= take;
            if remaining <= 0.0 {
                break;
            }
        }
        value
    });
    Ok(per_center.into_iter().fold(0.0f64, f64::max))
}
