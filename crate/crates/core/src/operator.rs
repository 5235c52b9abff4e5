//! Nyström realization of the integral operator and the Fredholm solves.
//!
//! The operator `f -> integral K(x, y) f(y) dnu(y)` becomes the matrix
//! `A[i][j] = w_j K(x_i, x_j)` with zero diagonal (single points carry no
//! measure in the continuum, so the singular diagonal never enters). The
//! max row absolute sum serves as the operator-norm surrogate on bounded
//! functions.
//!
//! Solves target `mu - A mu = g`, directly (dense LU) or by the Neumann
//! series when the norm surrogate is below one. The bootstrap identity
//! `A^r mu = mu - sum_{j<r} A^j g` is exact linear algebra at the discrete
//! level and is verified, not assumed.
//!
//! All reductions run in fixed index order, so results are bitwise
//! reproducible for any worker count.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::exec::map_indexed;
use crate::kernels::{tabulate, Kernel, KernelMatrix};
use crate::space::SampledMeasureSpace;

/// Residual target for direct solves, scaled by `1 + max|g|`.
pub const DIRECT_RESIDUAL_TOL: f64 = 1e-10;
/// Condition estimates beyond this refuse the solve.
pub const CONDITION_CEILING: f64 = 1e12;
/// Condition estimation inverts densely; skipped above this size.
pub const CONDITION_ESTIMATE_MAX_N: usize = 1024;

/// A discretized integral operator on a sampled space.
#[derive(Debug, Clone)]
pub struct NystromSystem<'a> {
    space: &'a SampledMeasureSpace,
    /// Unweighted kernel values, zero diagonal.
    kernel_table: KernelMatrix,
    /// `a[i][j] = w_j * kernel_table[i][j]`, zero diagonal.
    a: KernelMatrix,
    row_sum_norm: f64,
}

impl<'a> NystromSystem<'a> {
    /// Tabulates the kernel and weights it into the operator matrix.
    /// Any non-finite off-diagonal value aborts, naming the pair.
    pub fn assemble(space: &'a SampledMeasureSpace, kernel: &Kernel) -> Result<Self> {
        let table = tabulate(kernel, space)?;
        Self::from_table(space, table)
    }

    /// Builds the system from an existing tabulation (diagonal ignored).
    pub fn from_table(space: &'a SampledMeasureSpace, mut table: KernelMatrix) -> Result<Self> {
        if table.n() != space.n() {
            return Err(Error::SpaceMismatch(format!(
                "tabulation holds {} points, space has {}",
                table.n(),
                space.n()
            )));
        }
        table.zero_diagonal();
        let n = space.n();
        let w = space.weights();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            let row = table.row(i);
            for j in 0..n {
                if j == i {
                    continue;
                }
                let v = row[j];
                if !v.is_finite() {
                    return Err(Error::NonFiniteKernel { i, j });
                }
                a[i * n + j] = w[j] * v;
            }
        }
        let a = KernelMatrix::new(n, a, space.label())?;
        let row_sum_norm = row_sum_norm_of(&a);
        Ok(NystromSystem { space, kernel_table: table, a, row_sum_norm })
    }

    pub fn space(&self) -> &SampledMeasureSpace {
        self.space
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    /// Unweighted kernel values.
    pub fn kernel_table(&self) -> &KernelMatrix {
        &self.kernel_table
    }

    /// The weighted operator matrix.
    pub fn matrix(&self) -> &KernelMatrix {
        &self.a
    }

    /// Stored max row absolute sum.
    pub fn row_sum_norm(&self) -> f64 {
        self.row_sum_norm
    }

    /// Recomputes the norm surrogate from the matrix.
    pub fn recomputed_row_sum_norm(&self) -> f64 {
        row_sum_norm_of(&self.a)
    }

    /// Scale factor that would bring the norm surrogate to `target`.
    pub fn normalize_to(&self, target: f64) -> Result<f64> {
        if !(target > 0.0 && target < 1.0) {
            return Err(Error::invalid(format!(
                "target norm must lie in (0, 1), got {target}"
            )));
        }
        if self.row_sum_norm == 0.0 {
            return Err(Error::invalid("cannot normalize a zero operator"));
        }
        Ok(target / self.row_sum_norm)
    }

    /// Returns the system scaled so its stored norm surrogate is exactly
    /// `target`; the recomputed norm agrees to round-off.
    pub fn scaled_to_norm(&self, target: f64) -> Result<NystromSystem<'a>> {
        let lambda = self.normalize_to(target)?;
        let mut out = self.scaled(lambda);
        out.row_sum_norm = target;
        Ok(out)
    }

    /// Multiplies the kernel (and the operator matrix) by `lambda`.
    pub fn scaled(&self, lambda: f64) -> NystromSystem<'a> {
        let n = self.n();
        let scale = |m: &KernelMatrix| {
            let values = m.values().iter().map(|v| lambda * v).collect();
            KernelMatrix::new(n, values, self.space.label()).expect("same shape")
        };
        let a = scale(&self.a);
        let row_sum_norm = row_sum_norm_of(&a);
        NystromSystem { space: self.space, kernel_table: scale(&self.kernel_table), a, row_sum_norm }
    }

    /// Matrix-vector product in fixed index order.
    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        let n = self.n();
        if f.len() != n {
            return Err(Error::invalid(format!(
                "vector has length {}, expected {n}",
                f.len()
            )));
        }
        Ok(map_indexed(n, |i| {
            let row = self.a.row(i);
            let mut sum = 0.0;
            for j in 0..n {
                sum += row[j] * f[j];
            }
            sum
        }))
    }
}

fn row_sum_norm_of(a: &KernelMatrix) -> f64 {
    let mut best = 0.0f64;
    for i in 0..a.n() {
        let mut sum = 0.0;
        for v in a.row(i) {
            sum += v.abs();
        }
        best = best.max(sum);
    }
    best
}

/// Composite kernel `K3(x, y) = integral K1(x, t) K2(t, y) dnu(t)` as a
/// tabulation on the shared space. The quadrature skips `t` at either
/// endpoint (both factor diagonals are zero).
pub fn compose_numeric(
    sys1: &NystromSystem<'_>,
    sys2: &NystromSystem<'_>,
) -> Result<KernelMatrix> {
    if sys1.space.label() != sys2.space.label() || sys1.n() != sys2.n() {
        return Err(Error::SpaceMismatch(format!(
            "factors live on `{}` ({} points) and `{}` ({} points)",
            sys1.space.label(),
            sys1.n(),
            sys2.space.label(),
            sys2.n()
        )));
    }
    Ok(compose_tables(sys1.space, &sys1.kernel_table, &sys2.kernel_table))
}

fn compose_tables(
    space: &SampledMeasureSpace,
    k1: &KernelMatrix,
    k2: &KernelMatrix,
) -> KernelMatrix {
    let n = space.n();
    let w = space.weights();
    let rows = map_indexed(n, |i| {
        let r1 = k1.row(i);
        let mut out = vec![0.0; n];
        for t in 0..n {
            let c = w[t] * r1[t];
            if c == 0.0 {
                continue;
            }
            let r2 = k2.row(t);
            for (o, &v) in out.iter_mut().zip(r2) {
                *o += c * v;
            }
        }
        out[i] = 0.0;
        out
    });
    let mut values = Vec::with_capacity(n * n);
    for row in rows {
        values.extend_from_slice(&row);
    }
    KernelMatrix::new(n, values, space.label()).expect("square by construction")
}

/// The `r`-fold composite kernel as a tabulation; `r = 1` is the kernel's
/// own tabulation.
pub fn iterate_kernel(system: &NystromSystem<'_>, r: u32) -> Result<KernelMatrix> {
    if r == 0 {
        return Err(Error::invalid("iteration count must be at least 1"));
    }
    let mut acc = system.kernel_table.clone();
    for _ in 1..r {
        acc = compose_tables(system.space, &acc, &system.kernel_table);
    }
    Ok(acc)
}

/// How a solve produced its solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Direct,
    Neumann,
}

impl SolveMethod {
    pub fn name(&self) -> &'static str {
        match self {
            SolveMethod::Direct => "direct",
            SolveMethod::Neumann => "neumann",
        }
    }
}

/// A solution of `mu - A mu = g` with its recomputed residual.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub mu: Vec<f64>,
    /// `max_i |mu_i - (A mu)_i - g_i|`, recomputed after the solve.
    pub residual_inf: f64,
    pub method: SolveMethod,
    pub neumann_terms: Option<u32>,
    pub condition_estimate: Option<f64>,
}

fn residual_inf(system: &NystromSystem<'_>, mu: &[f64], g: &[f64]) -> Result<f64> {
    let amu = system.apply(mu)?;
    let mut worst = 0.0f64;
    for i in 0..mu.len() {
        worst = worst.max((mu[i] - amu[i] - g[i]).abs());
    }
    Ok(worst)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Dense LU solve of `(I - A) mu = g` with a condition estimate and up to
/// two rounds of iterative refinement against the residual target.
pub fn solve_direct(system: &NystromSystem<'_>, g: &[f64]) -> Result<SolveReport> {
    let n = system.n();
    if g.len() != n {
        return Err(Error::invalid(format!("datum has length {}, expected {n}", g.len())));
    }
    let m = DMatrix::from_fn(n, n, |i, j| {
        let a = system.a.get(i, j);
        if i == j {
            1.0 - a
        } else {
            -a
        }
    });

    let condition_estimate = if n <= CONDITION_ESTIMATE_MAX_N {
        let norm_m = inf_norm(&m);
        match m.clone().try_inverse() {
            Some(inv) => {
                let cond = norm_m * inf_norm(&inv);
                if !cond.is_finite() || cond > CONDITION_CEILING {
                    return Err(Error::Solve(format!(
                        "system is ill-conditioned (estimate {cond:.3e} exceeds {CONDITION_CEILING:.0e})"
                    )));
                }
                Some(cond)
            }
            None => return Err(Error::Solve("system matrix is singular".into())),
        }
    } else {
        None
    };

    let lu = m.lu();
    let mut mu = match lu.solve(&DVector::from_column_slice(g)) {
        Some(sol) => sol.as_slice().to_vec(),
        None => return Err(Error::Solve("LU factorization failed".into())),
    };

    let tol = DIRECT_RESIDUAL_TOL * (1.0 + max_abs(g));
    let mut residual = residual_inf(system, &mu, g)?;
    for _ in 0..2 {
        if residual <= tol {
            break;
        }
        let amu = system.apply(&mu)?;
        let defect: Vec<f64> = (0..n).map(|i| mu[i] - amu[i] - g[i]).collect();
        let Some(corr) = lu.solve(&DVector::from_column_slice(&defect)) else {
            break;
        };
        for (m_i, c) in mu.iter_mut().zip(corr.iter()) {
            *m_i -= c;
        }
        residual = residual_inf(system, &mu, g)?;
    }
    if residual > tol {
        return Err(Error::Solve(format!(
            "residual {residual:.3e} exceeds the target {tol:.3e} after refinement"
        )));
    }
    Ok(SolveReport {
        mu,
        residual_inf: residual,
        method: SolveMethod::Direct,
        neumann_terms: None,
        condition_estimate,
    })
}

fn inf_norm(m: &DMatrix<f64>) -> f64 {
    let mut best = 0.0f64;
    for i in 0..m.nrows() {
        let mut sum = 0.0;
        for j in 0..m.ncols() {
            sum += m[(i, j)].abs();
        }
        best = best.max(sum);
    }
    best
}

/// Neumann-series solve `mu = sum_j A^j g`, truncated when a term's max
/// norm drops below `tol`. Refused unless the norm surrogate is below one.
pub fn solve_neumann(
    system: &NystromSystem<'_>,
    g: &[f64],
    tol: f64,
    max_terms: u32,
) -> Result<SolveReport> {
    if system.row_sum_norm >= 1.0 {
        return Err(Error::Solve(format!(
            "Neumann series needs row-sum norm < 1, measured {}",
            system.row_sum_norm
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    if max_terms == 0 {
        return Err(Error::invalid("max_terms must be at least 1"));
    }
    let n = system.n();
    if g.len() != n {
        return Err(Error::invalid(format!("datum has length {}, expected {n}", g.len())));
    }
    let mut mu = g.to_vec();
    let mut term = g.to_vec();
    let mut terms = 1u32;
    loop {
        term = system.apply(&term)?;
        if max_abs(&term) < tol {
            break;
        }
        if terms >= max_terms {
            return Err(Error::Solve(format!(
                "Neumann series did not reach tol {tol:.3e} within {max_terms} terms"
            )));
        }
        for (m_i, t) in mu.iter_mut().zip(&term) {
            *m_i += t;
        }
        terms += 1;
    }
    let residual = residual_inf(system, &mu, g)?;
    Ok(SolveReport {
        mu,
        residual_inf: residual,
        method: SolveMethod::Neumann,
        neumann_terms: Some(terms),
        condition_estimate: None,
    })
}

/// Max deviation in the bootstrap identity
/// `A^r mu = mu - sum_{j=0}^{r-1} A^j g`, which is exact linear algebra
/// for any discrete solution. `mu` must solve the system to the direct
/// residual target.
pub fn verify_bootstrap(
    system: &NystromSystem<'_>,
    mu: &[f64],
    g: &[f64],
    r: u32,
) -> Result<f64> {
    if r == 0 {
        return Err(Error::invalid("bootstrap order must be at least 1"));
    }
    let tol = DIRECT_RESIDUAL_TOL * (1.0 + max_abs(g));
    let residual = residual_inf(system, mu, g)?;
    if residual > tol {
        return Err(Error::invalid(format!(
            "mu does not solve the system: residual {residual:.3e} exceeds {tol:.3e}"
        )));
    }

    let mut a_pow_mu = mu.to_vec();
    for _ in 0..r {
        a_pow_mu = system.apply(&a_pow_mu)?;
    }
    let mut partial = g.to_vec();
    let mut a_pow_g = g.to_vec();
    for _ in 1..r {
        a_pow_g = system.apply(&a_pow_g)?;
        for (p, t) in partial.iter_mut().zip(&a_pow_g) {
            *p += t;
        }
    }
    let mut worst = 0.0f64;
    for i in 0..mu.len() {
        worst = worst.max((a_pow_mu[i] - mu[i] + partial[i]).abs());
    }
    Ok(worst)
}
