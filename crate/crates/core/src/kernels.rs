//! Off-diagonal kernels and their two class seminorms.
//!
//! A kernel of potential type `s` satisfies `sup |K(x,y)| d(x,y)^s < inf`
//! over distinct points; the full class `(s1, s2, s3)` adds the smoothness
//! seminorm
//!
//! `sup (d(x',y)^s2 / d(x',x'')^s3) * |K(x',y) - K(x'',y)|`
//!
//! over triples with `d(x',y) >= 2 d(x',x'')` (the complement of the open
//! double ball, so the test is non-strict). The potential norm never exceeds
//! the sum of the two suprema, which is the class norm.
//!
//! Built-in families: `riesz(s) = d^-s`, `log_riesz(s) = d^-s (1 + |ln d|)`,
//! scalar multiples, and tabulated matrices. Evaluation is defined only off
//! the diagonal; touching the diagonal is a hard error.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::map_indexed;
use crate::space::SampledMeasureSpace;

/// Full triple scans are exact up to this size; beyond it the middle index
/// is subsampled (seeded).
pub const TRIPLE_SCAN_CAP: usize = 512;
const SUBSAMPLE_SEED: u64 = 0x534D_4F4F;

/// A dense kernel tabulation. The diagonal is stored (as written by the
/// producer) but never read by any consumer in this crate.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    n: usize,
    values: Vec<f64>,
    label: String,
}

impl KernelMatrix {
    /// Wraps row-major `n x n` values. An empty label matches any space of
    /// the right size; a nonempty label must equal the space label at use.
    pub fn new(n: usize, values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::invalid(format!(
                "kernel matrix has {} entries, expected {}",
                values.len(),
                n * n
            )));
        }
        Ok(KernelMatrix { n, values, label: label.into() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[i * self.n + j] = v;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Row `i` as a slice.
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn zero_diagonal(&mut self) {
        for i in 0..self.n {
            self.values[i * self.n + i] = 0.0;
        }
    }

    /// Parses the square-matrix text format: a header line `n`, then `n`
    /// rows of `n` numbers. `#` comments and blank lines as in point clouds.
    pub fn parse(text: &str, label: impl Into<String>) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut values: Vec<f64> = Vec::new();
        let mut rows = 0usize;
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
            match n {
                None => {
                    if tokens.len() != 1 {
                        return Err(parse_err("header must be a single size token".into()));
                    }
                    let size: usize = tokens[0]
                        .parse()
                        .map_err(|_| parse_err(format!("bad size `{}`", tokens[0])))?;
                    if size == 0 {
                        return Err(parse_err("size must be positive".into()));
                    }
                    n = Some(size);
                    values.reserve(size * size);
                }
                Some(size) => {
                    if rows == size {
                        return Err(parse_err(format!("more than {size} rows")));
                    }
                    if tokens.len() != size {
                        return Err(parse_err(format!(
                            "expected {size} entries, found {}",
                            tokens.len()
                        )));
                    }
                    for tok in tokens {
                        let v: f64 = tok
                            .parse()
                            .map_err(|_| parse_err(format!("bad entry `{tok}`")))?;
                        if !v.is_finite() {
                            return Err(parse_err(format!("non-finite entry `{tok}`")));
                        }
                        values.push(v);
                    }
                    rows += 1;
                }
            }
        }
        match n {
            None => Err(Error::Parse { line: 0, message: "empty matrix file".into() }),
            Some(size) if rows < size => Err(Error::Parse {
                line: 0,
                message: format!("expected {size} rows, found {rows}"),
            }),
            Some(size) => KernelMatrix::new(size, values, label),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        Self::parse(&text, "")
    }

    /// Writes the square-matrix text format with round-trip float formatting.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.n);
        for i in 0..self.n {
            let mut line = String::new();
            for j in 0..self.n {
                if j > 0 {
                    line.push(' ');
                }
                let _ = write!(line, "{}", self.get(i, j));
            }
            let _ = writeln!(out, "{line}");
        }
        std::fs::write(path, out)?;
        Ok(())
    }
}

/// An off-diagonal kernel.
#[derive(Debug, Clone)]
pub enum Kernel {
    /// `d(x,y)^-s`.
    Riesz { s: f64 },
    /// `d(x,y)^-s * (1 + |ln d(x,y)|)`.
    LogRiesz { s: f64 },
    /// `lambda * inner`.
    Scaled { lambda: f64, inner: Box<Kernel> },
    /// Dense values bound to a space label.
    Tabulated(KernelMatrix),
}

impl Kernel {
    pub fn riesz(s: f64) -> Result<Self> {
        if !(s >= 0.0) || !s.is_finite() {
            return Err(Error::invalid(format!("riesz exponent must be >= 0, got {s}")));
        }
        Ok(Kernel::Riesz { s })
    }

    pub fn log_riesz(s: f64) -> Result<Self> {
        if !(s >= 0.0) || !s.is_finite() {
            return Err(Error::invalid(format!("log-riesz exponent must be >= 0, got {s}")));
        }
        Ok(Kernel::LogRiesz { s })
    }

    /// Multiplies a kernel by a finite scalar; nested scalings flatten.
    pub fn scaled(self, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::invalid(format!("scale factor must be finite, got {lambda}")));
        }
        Ok(match self {
            Kernel::Scaled { lambda: l0, inner } => {
                Kernel::Scaled { lambda: lambda * l0, inner }
            }
            other => Kernel::Scaled { lambda, inner: Box::new(other) },
        })
    }

    /// Parses a kernel spec: `riesz:S`, `logriesz:S`, `scale:L:<spec>`,
    /// `table:<path>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let parse_err =
            |message: String| Error::Parse { line: 0, message: format!("kernel spec: {message}") };
        let (family, rest) = match spec.split_once(':') {
            Some(pair) => pair,
            None => return Err(parse_err(format!("`{spec}` has no parameters"))),
        };
        match family {
            "riesz" => {
                let s: f64 =
                    rest.parse().map_err(|_| parse_err(format!("bad exponent `{rest}`")))?;
                Kernel::riesz(s)
            }
            "logriesz" => {
                let s: f64 =
                    rest.parse().map_err(|_| parse_err(format!("bad exponent `{rest}`")))?;
                Kernel::log_riesz(s)
            }
            "scale" => {
                let (lambda_str, inner_spec) = rest
                    .split_once(':')
                    .ok_or_else(|| parse_err("scale needs `scale:L:<spec>`".into()))?;
                let lambda: f64 = lambda_str
                    .parse()
                    .map_err(|_| parse_err(format!("bad scale factor `{lambda_str}`")))?;
                Kernel::parse(inner_spec)?.scaled(lambda)
            }
            "table" => {
                if rest.is_empty() {
                    return Err(parse_err("table needs a file path".into()));
                }
                Ok(Kernel::Tabulated(KernelMatrix::load(rest)?))
            }
            other => Err(parse_err(format!("unknown family `{other}`"))),
        }
    }

    /// Textual form that [`Kernel::parse`] accepts again (tabulations print
    /// as `table:<label>`).
    pub fn describe(&self) -> String {
        match self {
            Kernel::Riesz { s } => format!("riesz:{s}"),
            Kernel::LogRiesz { s } => format!("logriesz:{s}"),
            Kernel::Scaled { lambda, inner } => format!("scale:{lambda}:{}", inner.describe()),
            Kernel::Tabulated(m) => format!("table:{}", m.label()),
        }
    }

    /// The built-in singularity exponent, when the family has one.
    pub fn nominal_exponent(&self) -> Option<f64> {
        match self {
            Kernel::Riesz { s } | Kernel::LogRiesz { s } => Some(*s),
            Kernel::Scaled { inner, .. } => inner.nominal_exponent(),
            Kernel::Tabulated(_) => None,
        }
    }

    /// Kernel value at `(points[i], points[j])`, `i != j`.
    pub fn eval(&self, space: &SampledMeasureSpace, i: usize, j: usize) -> Result<f64> {
        if i == j {
            return Err(Error::DiagonalAccess(i));
        }
        let n = space.n();
        if i >= n || j >= n {
            return Err(Error::invalid(format!("pair ({i}, {j}) out of range for {n} points")));
        }
        match self {
            Kernel::Riesz { s } => Ok(space.dist(i, j).powf(-s)),
            Kernel::LogRiesz { s } => {
                let d = space.dist(i, j);
                Ok(d.powf(-s) * (1.0 + d.ln().abs()))
            }
            Kernel::Scaled { lambda, inner } => Ok(lambda * inner.eval(space, i, j)?),
            Kernel::Tabulated(m) => {
                if m.n() != n {
                    return Err(Error::SpaceMismatch(format!(
                        "tabulation holds {} points, space has {n}",
                        m.n()
                    )));
                }
                Ok(m.get(i, j))
            }
        }
    }

    /// Checks a tabulated kernel is bound to this space (label and size).
    pub fn ensure_domain(&self, space: &SampledMeasureSpace) -> Result<()> {
        match self {
            Kernel::Tabulated(m) => {
                if m.n() != space.n() {
                    return Err(Error::SpaceMismatch(format!(
                        "tabulation holds {} points, space has {}",
                        m.n(),
                        space.n()
                    )));
                }
                if !m.label().is_empty() && m.label() != space.label() {
                    return Err(Error::SpaceMismatch(format!(
                        "tabulation was built for `{}`, space is `{}`",
                        m.label(),
                        space.label()
                    )));
                }
                Ok(())
            }
            Kernel::Scaled { inner, .. } => inner.ensure_domain(space),
            _ => Ok(()),
        }
    }
}

/// Dense tabulation of a kernel on a space; the diagonal is left at zero.
pub fn tabulate(kernel: &Kernel, space: &SampledMeasureSpace) -> Result<KernelMatrix> {
    kernel.ensure_domain(space)?;
    let n = space.n();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                values[i * n + j] = kernel.eval(space, i, j)?;
            }
        }
    }
    KernelMatrix::new(n, values, space.label())
}

/// Potential norm `max |K(i,j)| d(i,j)^s` over off-diagonal pairs.
/// Coincident sample points (distance 0) represent the same continuum point
/// and are skipped.
pub fn potential_norm(kernel: &Kernel, space: &SampledMeasureSpace, s: f64) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::invalid(format!("exponent must be finite, got {s}")));
    }
    let table = tabulate(kernel, space)?;
    let n = space.n();
    let per_row = map_indexed(n, |i| {
        let krow = table.row(i);
        let drow = space.dist_row(i);
        let mut best = 0.0f64;
        for j in 0..n {
            if j == i || drow[j] == 0.0 {
                continue;
            }
            best = best.max(krow[j].abs() * drow[j].powf(s));
        }
        best
    });
    Ok(per_row.into_iter().fold(0.0f64, f64::max))
}

/// Result of a smoothness-seminorm scan.
#[derive(Debug, Clone, Copy)]
pub struct SmoothnessEstimate {
    pub value: f64,
    pub admissible_triples: u64,
    /// True when the middle index was subsampled (n above the scan cap).
    pub truncated: bool,
    /// True when no triple satisfied the admissibility test.
    pub warning: bool,
}

/// Smoothness seminorm: the maximum of
/// `(d(x',y)^s2 / d(x',x'')^s3) * |K(x',y) - K(x'',y)|` over ordered triples
/// with `x' != x''` and `d(x',y) >= 2 d(x',x'')`. Exhaustive up to
/// [`TRIPLE_SCAN_CAP`] points, seeded subsampling of `x''` beyond.
pub fn smoothness_seminorm(
    kernel: &Kernel,
    space: &SampledMeasureSpace,
    s2: f64,
    s3: f64,
) -> Result<SmoothnessEstimate> {
    if !(s3 > 0.0) || !s3.is_finite() {
        return Err(Error::invalid(format!("s3 must be positive, got {s3}")));
    }
    if !(s2 >= 0.0) || !s2.is_finite() {
        return Err(Error::invalid(format!("s2 must be nonnegative, got {s2}")));
    }
    let table = tabulate(kernel, space)?;
    let n = space.n();

    // Distance powers are hoisted out of the triple loop.
    let mut p2 = vec![0.0; n * n];
    let mut p3 = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let d = space.dist(i, j);
                p2[i * n + j] = d.powf(s2);
                p3[i * n + j] = d.powf(s3);
            }
        }
    }

    let truncated = n > TRIPLE_SCAN_CAP;
    let per_xp: Vec<(f64, u64)> = map_indexed(n, |xp| {
        let drow = space.dist_row(xp);
        let krow = table.row(xp);
        let p2row = &p2[xp * n..(xp + 1) * n];
        let mut best = 0.0f64;
        let mut count = 0u64;

        let mut scan_xpp = |xpp: usize| {
            if xpp == xp {
                return;
            }
            let sep = drow[xpp];
            if sep == 0.0 {
                return;
            }
            let threshold = 2.0 * sep;
            let inv_p3 = 1.0 / p3[xp * n + xpp];
            let krow_pp = table.row(xpp);
            for y in 0..n {
                if drow[y] >= threshold {
                    let v = p2row[y] * inv_p3 * (krow[y] - krow_pp[y]).abs();
                    best = best.max(v);
                    count += 1;
                }
            }
        };

        if truncated {
            let mut rng =
                ChaCha8Rng::seed_from_u64(SUBSAMPLE_SEED ^ (xp as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            for _ in 0..TRIPLE_SCAN_CAP {
                scan_xpp(rng.gen_range(0..n));
            }
        } else {
            for xpp in 0..n {
                scan_xpp(xpp);
            }
        }
        (best, count)
    });

    let mut value = 0.0f64;
    let mut admissible = 0u64;
    for (v, c) in per_xp {
        value = value.max(v);
        admissible += c;
    }
    Ok(SmoothnessEstimate {
        value,
        admissible_triples: admissible,
        truncated,
        warning: admissible == 0,
    })
}

/// Both class seminorms of a kernel on a space.
#[derive(Debug, Clone)]
pub struct SeminormReport {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub potential_norm: f64,
    pub smoothness_seminorm: Option<f64>,
    pub admissible_triple_count: u64,
    pub truncated: bool,
    /// Sum of the two suprema; dominates the potential norm.
    pub class_norm: f64,
}

/// Measures both seminorms of the class `(s1, s2, s3)`.
pub fn class_membership_report(
    kernel: &Kernel,
    space: &SampledMeasureSpace,
    s1: f64,
    s2: f64,
    s3: f64,
) -> Result<SeminormReport> {
    let potential = potential_norm(kernel, space, s1)?;
    let smooth = smoothness_seminorm(kernel, space, s2, s3)?;
    let class_norm = potential + smooth.value;
    debug_assert!(potential <= class_norm);
    Ok(SeminormReport {
        s1,
        s2,
        s3,
        potential_norm: potential,
        smoothness_seminorm: Some(smooth.value),
        admissible_triple_count: smooth.admissible_triples,
        truncated: smooth.truncated,
        class_norm,
    })
}
