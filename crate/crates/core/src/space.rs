//! Finite samplings of compact metric measure sets.
//!
//! A [`SampledMeasureSpace`] is a list of ambient points with a full pairwise
//! distance matrix and one nonnegative quadrature weight per point. Weights
//! play the role of the measure: the mass of a set of nodes is the sum of
//! their weights. The distance matrix is materialized eagerly; construction
//! validates symmetry, the zero diagonal, and spot-checks the triangle
//! inequality (exhaustively up to 512 points, seeded sampling beyond).
//!
//! Built-in families: an equispaced circle under the chordal distance, the
//! level-`l` middle-thirds Cantor construction, a weighted interval with a
//! cusp density (a non-doubling witness), and point clouds loaded from text
//! files.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Default cap on the number of points; the distance matrix is dense.
pub const DEFAULT_MAX_POINTS: usize = 4096;

/// Hard cap used by builders whose size is already guarded (Cantor levels).
const ABSOLUTE_MAX_POINTS: usize = 1 << 14;

/// Exhaustive triangle-inequality validation up to this size; seeded
/// sampling beyond.
const TRIANGLE_EXHAUSTIVE_LIMIT: usize = 512;
const TRIANGLE_SAMPLES: usize = 1_000_000;
const TRIANGLE_SEED: u64 = 0x414C_464F;

/// Weight profile for [`build_weighted_interval`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightProfile {
    /// Density 1.
    Uniform,
    /// Density `exp(-1/x)` with value 0 at `x = 0`; vanishes to all orders
    /// at the cusp, which breaks the doubling property while keeping the
    /// upper 1-Ahlfors bound.
    ExpCusp,
}

impl WeightProfile {
    pub fn name(self) -> &'static str {
        match self {
            WeightProfile::Uniform => "uniform",
            WeightProfile::ExpCusp => "exp_cusp",
        }
    }

    fn density(self, x: f64) -> f64 {
        match self {
            WeightProfile::Uniform => 1.0,
            WeightProfile::ExpCusp => {
                if x <= 0.0 {
                    0.0
                } else {
                    (-1.0 / x).exp()
                }
            }
        }
    }
}

/// A finite metric measure sampling: points, pairwise distances, weights.
#[derive(Debug, Clone)]
pub struct SampledMeasureSpace {
    dim: usize,
    points: Vec<f64>,
    dist: Vec<f64>,
    weights: Vec<f64>,
    total_mass: f64,
    diameter: f64,
    mesh: f64,
    label: String,
}

impl SampledMeasureSpace {
    /// Builds a space from ambient points and weights; distances are
    /// Euclidean. Fails on inconsistent dimensions, non-finite data,
    /// negative weights, or more than [`DEFAULT_MAX_POINTS`] points.
    pub fn from_points(
        points: Vec<Vec<f64>>,
        weights: Vec<f64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        Self::from_points_with_limit(points, weights, label, None, DEFAULT_MAX_POINTS)
    }

    fn from_points_with_limit(
        points: Vec<Vec<f64>>,
        weights: Vec<f64>,
        label: impl Into<String>,
        total_mass: Option<f64>,
        max_points: usize,
    ) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::invalid("a space needs at least one point"));
        }
        if n > max_points {
            return Err(Error::ResourceLimit(format!(
                "{n} points exceeds the cap of {max_points}"
            )));
        }
        if weights.len() != n {
            return Err(Error::invalid(format!(
                "{} weights for {} points",
                weights.len(),
                n
            )));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::invalid("points must have at least one coordinate"));
        }
        let mut flat = Vec::with_capacity(n * dim);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::invalid(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            for &c in p {
                if !c.is_finite() {
                    return Err(Error::invalid(format!("point {i} has a non-finite coordinate")));
                }
                flat.push(c);
            }
        }
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::invalid(format!(
                    "weight {i} is {w}; weights must be finite and nonnegative"
                )));
            }
        }

        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let mut acc = 0.0;
                for k in 0..dim {
                    let d = flat[i * dim + k] - flat[j * dim + k];
                    acc += d * d;
                }
                let d = acc.sqrt();
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }

        Self::assemble(dim, flat, dist, weights, total_mass, label.into())
    }

    /// Builds a space from an explicit distance matrix (row-major `n x n`).
    /// Points are synthesized as 1-D placeholders; ambient coordinates are
    /// not meaningful for such spaces.
    pub fn from_distance_matrix(
        n: usize,
        dist: Vec<f64>,
        weights: Vec<f64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("a space needs at least one point"));
        }
        if n > DEFAULT_MAX_POINTS {
            return Err(Error::ResourceLimit(format!(
                "{n} points exceeds the cap of {DEFAULT_MAX_POINTS}"
            )));
        }
        if dist.len() != n * n {
            return Err(Error::invalid(format!(
                "distance matrix has {} entries, expected {}",
                dist.len(),
                n * n
            )));
        }
        if weights.len() != n {
            return Err(Error::invalid(format!("{} weights for {n} points", weights.len())));
        }
        let points = (0..n).map(|i| i as f64).collect();
        Self::assemble(1, points, dist, weights, None, label.into())
    }

    fn assemble(
        dim: usize,
        points: Vec<f64>,
        dist: Vec<f64>,
        weights: Vec<f64>,
        total_mass: Option<f64>,
        label: String,
    ) -> Result<Self> {
        let n = weights.len();
        for i in 0..n {
            if dist[i * n + i] != 0.0 {
                return Err(Error::invalid(format!("nonzero diagonal distance at index {i}")));
            }
            for j in (i + 1)..n {
                let d = dist[i * n + j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::invalid(format!("invalid distance at pair ({i}, {j})")));
                }
                if d != dist[j * n + i] {
                    return Err(Error::invalid(format!("asymmetric distance at pair ({i}, {j})")));
                }
            }
        }

        let mut diameter = 0.0f64;
        let mut mesh = f64::INFINITY;
        for i in 0..n {
            for j in (i + 1)..n {
                let d = dist[i * n + j];
                diameter = diameter.max(d);
                if d > 0.0 {
                    mesh = mesh.min(d);
                }
            }
        }
        if !mesh.is_finite() {
            mesh = 0.0;
        }

        check_triangle(&dist, n, diameter)?;

        let sum: f64 = weights.iter().sum();
        let total = total_mass.unwrap_or(sum);
        if total > 0.0 && ((sum - total) / total).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "weight sum {sum} deviates from declared total mass {total}"
            )));
        }

        Ok(SampledMeasureSpace {
            dim,
            points,
            dist,
            weights,
            total_mass: total,
            diameter,
            mesh,
            label,
        })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n() + j]
    }

    /// Row `i` of the distance matrix.
    #[inline]
    pub fn dist_row(&self, i: usize) -> &[f64] {
        let n = self.n();
        &self.dist[i * n..(i + 1) * n]
    }

    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// Largest pairwise distance.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Smallest positive pairwise distance; 0 for a single point.
    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Index and distance of the nearest other node.
    pub fn nearest_neighbor(&self, i: usize) -> (usize, f64) {
        let row = self.dist_row(i);
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (j, &d) in row.iter().enumerate() {
            if j != i && d < best_d {
                best = j;
                best_d = d;
            }
        }
        (best, best_d)
    }

    /// Distances from node `i` paired with weights, sorted ascending by
    /// distance (the center pair `(0, w_i)` included). Ties keep index order.
    pub fn sorted_row(&self, i: usize) -> Vec<(f64, f64)> {
        let row = self.dist_row(i);
        let mut out: Vec<(f64, f64)> = row
            .iter()
            .zip(self.weights.iter())
            .map(|(&d, &w)| (d, w))
            .collect();
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        out
    }

    /// Geometric radius grid `lo, lo*ratio, ...` capped at `hi`, with `hi`
    /// appended as the final radius.
    pub fn radius_grid(lo: f64, hi: f64, ratio: f64) -> Result<Vec<f64>> {
        if !(lo > 0.0) || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::invalid(format!("bad radius range [{lo}, {hi}]")));
        }
        if !(ratio > 1.0) {
            return Err(Error::invalid(format!("grid ratio {ratio} must exceed 1")));
        }
        let mut grid = Vec::new();
        let mut r = lo;
        while r < hi {
            grid.push(r);
            r *= ratio;
        }
        grid.push(hi);
        Ok(grid)
    }

    /// Default radius grid: geometric with ratio `2^(1/4)` from the mesh
    /// scale to the diameter. Falls back to `[1e-3, 1]` when the space is
    /// degenerate (fewer than two distinct points).
    pub fn default_radius_grid(&self) -> Vec<f64> {
        let ratio = 2.0f64.powf(0.25);
        if self.mesh > 0.0 && self.diameter > self.mesh {
            Self::radius_grid(self.mesh, self.diameter, ratio).unwrap()
        } else {
            Self::radius_grid(1e-3, 1.0, ratio).unwrap()
        }
    }
}

fn check_triangle(dist: &[f64], n: usize, diameter: f64) -> Result<()> {
    let tol = 1e-9 * (1.0 + diameter);
    let check = |i: usize, j: usize, k: usize| -> Result<()> {
        let direct = dist[i * n + k];
        let via = dist[i * n + j] + dist[j * n + k];
        if direct > via + tol {
            return Err(Error::invalid(format!(
                "triangle inequality fails for ({i}, {j}, {k}): {direct} > {via}"
            )));
        }
        Ok(())
    };
    if n <= TRIANGLE_EXHAUSTIVE_LIMIT {
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    // One orientation per unordered triple suffices together
                    // with its two rotations.
                    check(i, j, k)?;
                    check(j, k, i)?;
                    check(k, i, j)?;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(TRIANGLE_SEED);
        for _ in 0..TRIANGLE_SAMPLES {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            let k = rng.gen_range(0..n);
            check(i, j, k)?;
        }
    }
    Ok(())
}

/// Equispaced circle of the given radius under the chordal distance; every
/// node carries weight `2*pi*radius/n`. Needs `n >= 3`.
pub fn build_circle(n: usize, radius: f64) -> Result<SampledMeasureSpace> {
    if n < 3 {
        return Err(Error::invalid(format!("circle needs at least 3 points, got {n}")));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::invalid(format!("circle radius must be positive, got {radius}")));
    }
    let circumference = 2.0 * std::f64::consts::PI * radius;
    let w = circumference / n as f64;
    let mut points = Vec::with_capacity(n);
    for i in 0..n {
        let angle = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
        points.push(vec![radius * angle.cos(), radius * angle.sin()]);
    }
    let label = format!("circle:{n}:{radius}");
    SampledMeasureSpace::from_points_with_limit(
        points,
        vec![w; n],
        label,
        Some(circumference),
        DEFAULT_MAX_POINTS,
    )
}

/// The `2^level` left endpoints of the level-`level` middle-thirds Cantor
/// construction on `[0, 1]`, each carrying weight `2^-level`. The natural
/// regularity exponent is `ln 2 / ln 3`. Needs `level <= 14`.
pub fn build_cantor(level: u32) -> Result<SampledMeasureSpace> {
    if level > 14 {
        return Err(Error::ResourceLimit(format!(
            "cantor level {level} exceeds the cap of 14"
        )));
    }
    let mut endpoints = vec![0.0f64];
    for _ in 0..level {
        let mut next = Vec::with_capacity(endpoints.len() * 2);
        for &x in &endpoints {
            next.push(x / 3.0);
        }
        for &x in &endpoints {
            next.push(2.0 / 3.0 + x / 3.0);
        }
        next.sort_by(|a, b| a.partial_cmp(b).unwrap());
        endpoints = next;
    }
    let n = endpoints.len();
    let w = 0.5f64.powi(level as i32);
    let points = endpoints.into_iter().map(|x| vec![x]).collect();
    SampledMeasureSpace::from_points_with_limit(
        points,
        vec![w; n],
        format!("cantor:{level}"),
        Some(1.0),
        ABSOLUTE_MAX_POINTS,
    )
}

/// Regularity exponent of the middle-thirds Cantor set, `ln 2 / ln 3`.
pub fn cantor_exponent() -> f64 {
    2.0f64.ln() / 3.0f64.ln()
}

/// `n` equispaced nodes on `[0, 1]` with weight `density(x_i)/n`.
/// The `exp_cusp` profile is upper 1-Ahlfors regular but not doubling.
pub fn build_weighted_interval(n: usize, profile: WeightProfile) -> Result<SampledMeasureSpace> {
    if n < 2 {
        return Err(Error::invalid(format!("interval needs at least 2 points, got {n}")));
    }
    let mut points = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let x = i as f64 / (n - 1) as f64;
        points.push(vec![x]);
        weights.push(profile.density(x) / n as f64);
    }
    let label = format!("interval:{n}:{}", profile.name());
    SampledMeasureSpace::from_points_with_limit(points, weights, label, None, DEFAULT_MAX_POINTS)
}

/// Loads a point cloud from the text format written by [`save_point_cloud`]:
/// a header line `D n`, then `n` lines of `D` coordinates and one weight,
/// whitespace-separated. `#` starts a comment; blank lines are skipped.
pub fn load_point_cloud(path: impl AsRef<Path>) -> Result<SampledMeasureSpace> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let label = format!("cloud:{}", path.display());
    parse_point_cloud(&text, label)
}

/// Parses the point-cloud text format; see [`load_point_cloud`].
pub fn parse_point_cloud(text: &str, label: impl Into<String>) -> Result<SampledMeasureSpace> {
    let mut header: Option<(usize, usize)> = None;
    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse { line: line_no, message };

        match header {
            None => {
                if tokens.len() != 2 {
                    return Err(parse_err(format!(
                        "header must be `D n`, found {} tokens",
                        tokens.len()
                    )));
                }
                let d: usize = tokens[0]
                    .parse()
                    .map_err(|_| parse_err(format!("bad dimension `{}`", tokens[0])))?;
                let n: usize = tokens[1]
                    .parse()
                    .map_err(|_| parse_err(format!("bad point count `{}`", tokens[1])))?;
                if d == 0 {
                    return Err(parse_err("dimension must be positive".into()));
                }
                if n == 0 {
                    return Err(parse_err("point count must be positive".into()));
                }
                header = Some((d, n));
            }
            Some((d, n)) => {
                if points.len() == n {
                    return Err(parse_err(format!("more than {n} data rows")));
                }
                if tokens.len() != d + 1 {
                    return Err(parse_err(format!(
                        "expected {} values ({} coordinates + weight), found {}",
                        d + 1,
                        d,
                        tokens.len()
                    )));
                }
                let mut row = Vec::with_capacity(d);
                for tok in &tokens[..d] {
                    let v: f64 = tok
                        .parse()
                        .map_err(|_| parse_err(format!("bad coordinate `{tok}`")))?;
                    if !v.is_finite() {
                        return Err(parse_err(format!("non-finite coordinate `{tok}`")));
                    }
                    row.push(v);
                }
                let w: f64 = tokens[d]
                    .parse()
                    .map_err(|_| parse_err(format!("bad weight `{}`", tokens[d])))?;
                if !w.is_finite() || w < 0.0 {
                    return Err(parse_err(format!(
                        "weight must be finite and nonnegative, found `{}`",
                        tokens[d]
                    )));
                }
                points.push(row);
                weights.push(w);
            }
        }
    }

    match header {
        None => Err(Error::Parse { line: 0, message: "empty point-cloud file".into() }),
        Some((_, n)) if points.len() < n => Err(Error::Parse {
            line: 0,
            message: format!("expected {n} data rows, found {}", points.len()),
        }),
        Some(_) => SampledMeasureSpace::from_points(points, weights, label),
    }
}

/// Writes a space in the [`load_point_cloud`] text format. Coordinates and
/// weights use the shortest decimal form that round-trips, so a save/load
/// cycle reproduces distances exactly.
pub fn save_point_cloud(space: &SampledMeasureSpace, path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", space.dim(), space.n());
    for i in 0..space.n() {
        let mut line = String::new();
        for c in space.point(i) {
            let _ = write!(line, "{c} ");
        }
        let _ = write!(line, "{}", space.weight(i));
        let _ = writeln!(out, "{line}");
    }
    std::fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_total_mass_is_exact() {
        let space = build_circle(4, 1.0).unwrap();
        assert_eq!(space.total_mass(), 2.0 * std::f64::consts::PI);
        assert_eq!(space.n(), 4);
        assert_eq!(space.dim(), 2);
        // Chordal diameter of the unit circle.
        assert!((space.diameter() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn circle_weight_sum_matches_total() {
        let space = build_circle(360, 2.5).unwrap();
        let sum: f64 = space.weights().iter().sum();
        assert!(((sum - space.total_mass()) / space.total_mass()).abs() <= 1e-12);
    }

    #[test]
    fn circle_rejects_degenerate_sizes() {
        assert!(matches!(build_circle(2, 1.0), Err(Error::InvalidArgument(_))));
        assert!(matches!(build_circle(3, 0.0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn cantor_level_zero_and_one() {
        let c0 = build_cantor(0).unwrap();
        assert_eq!(c0.n(), 1);
        assert_eq!(c0.point(0), &[0.0]);
        assert_eq!(c0.total_mass(), 1.0);

        let c1 = build_cantor(1).unwrap();
        assert_eq!(c1.n(), 2);
        assert_eq!(c1.point(0), &[0.0]);
        assert!((c1.point(1)[0] - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(c1.weight(0), 0.5);
    }

    #[test]
    fn cantor_level_two_endpoints() {
        let c2 = build_cantor(2).unwrap();
        let xs: Vec<f64> = (0..4).map(|i| c2.point(i)[0]).collect();
        let expect = [0.0, 2.0 / 9.0, 2.0 / 3.0, 8.0 / 9.0];
        for (x, e) in xs.iter().zip(expect.iter()) {
            assert!((x - e).abs() < 1e-15, "{x} vs {e}");
        }
    }

    #[test]
    fn cantor_level_cap() {
        assert!(matches!(build_cantor(15), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn interval_uniform_two_points() {
        let space = build_weighted_interval(2, WeightProfile::Uniform).unwrap();
        assert_eq!(space.weights(), &[0.5, 0.5]);
        assert_eq!(space.diameter(), 1.0);
    }

    #[test]
    fn interval_cusp_weight_vanishes_at_zero() {
        let space = build_weighted_interval(100, WeightProfile::ExpCusp).unwrap();
        assert_eq!(space.weight(0), 0.0);
        assert!(space.weight(99) > 0.0);
    }

    #[test]
    fn mesh_and_diameter() {
        let space = build_circle(8, 1.0).unwrap();
        let chord = 2.0 * (std::f64::consts::PI / 8.0).sin();
        assert!((space.mesh() - chord).abs() < 1e-12);
        assert!((space.diameter() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn distance_matrix_is_symmetric_with_zero_diagonal() {
        let space = build_circle(17, 1.0).unwrap();
        for i in 0..space.n() {
            assert_eq!(space.dist(i, i), 0.0);
            for j in 0..space.n() {
                assert_eq!(space.dist(i, j), space.dist(j, i));
            }
        }
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let dist = vec![0.0, 1.0, 2.0, 0.0];
        let err = SampledMeasureSpace::from_distance_matrix(2, dist, vec![1.0, 1.0], "bad");
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn triangle_violation_rejected() {
        // d(0,2) = 10 > d(0,1) + d(1,2) = 2.
        let dist = vec![
            0.0, 1.0, 10.0, //
            1.0, 0.0, 1.0, //
            10.0, 1.0, 0.0,
        ];
        let err = SampledMeasureSpace::from_distance_matrix(3, dist, vec![1.0; 3], "bad");
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn point_cloud_round_trip_preserves_distances() {
        let dir = std::env::temp_dir().join("fredholm_metric_space_tests");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("circle16.txt");
        let space = build_circle(16, 1.0).unwrap();
        save_point_cloud(&space, &path).unwrap();
        let loaded = load_point_cloud(&path).unwrap();
        assert_eq!(loaded.n(), space.n());
        for i in 0..space.n() {
            for j in 0..space.n() {
                assert_eq!(loaded.dist(i, j), space.dist(i, j));
            }
            assert_eq!(loaded.weight(i), space.weight(i));
        }
    }

    #[test]
    fn point_cloud_parse_errors_carry_line_numbers() {
        let bad_weight = "1 2\n0.0 1.0\n1.0 -0.5\n";
        match parse_point_cloud(bad_weight, "t") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }

        let bad_arity = "2 1\n0.0 1.0\n";
        match parse_point_cloud(bad_arity, "t") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }

        let truncated = "1 3\n0.0 1.0\n";
        assert!(matches!(parse_point_cloud(truncated, "t"), Err(Error::Parse { .. })));
    }

    #[test]
    fn point_cloud_comments_and_blanks_ignored() {
        let text = "# sample cloud\n1 2\n\n0.0 0.25 # left\n1.0 0.75\n";
        let space = parse_point_cloud(text, "t").unwrap();
        assert_eq!(space.n(), 2);
        assert_eq!(space.weight(0), 0.25);
        assert_eq!(space.dist(0, 1), 1.0);
    }

    #[test]
    fn radius_grid_is_geometric_and_capped() {
        let grid = SampledMeasureSpace::radius_grid(0.05, 2.0, 2.0f64.powf(0.25)).unwrap();
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*grid.last().unwrap(), 2.0);
        assert_eq!(grid[0], 0.05);
    }

    #[test]
    fn sorted_row_is_ascending() {
        let space = build_circle(32, 1.0).unwrap();
        let row = space.sorted_row(5);
        assert_eq!(row[0].0, 0.0);
        assert!(row.windows(2).all(|w| w[0].0 <= w[1].0));
        assert_eq!(row.len(), 32);
    }
}
