//! End-to-end analysis presets: CA, TCA, LRA/TLRA, covariance
//! (interbattery) analysis, marginal-free CA via matrix balancing, the
//! closed forms for one-zero-column tables, and the convergence
//! laboratory for powered data.

use nalgebra::{DMatrix, DVector};

use crate::axis::Decomposition;
use crate::config::{BALANCE_MAX_ITER, BALANCE_TOL};
use crate::decomp::{taxicab_svd, weighted_svd, Method};
use crate::error::{Error, Result};
use crate::interaction::{covariance_residuals, log_interaction, pearson_contrast};
use crate::table::{normalize, ContingencyTable, CorrespondenceMatrix};
use crate::transform::power_transform;
use crate::triplet::Triplet;
use crate::weights::{make_weights, WeightKind, WeightScheme};

fn factorize(t: &Triplet, method: Method, k: usize) -> Result<Decomposition> {
    match method {
        Method::Svd => weighted_svd(t, k),
        Method::Taxicab(algorithm) => taxicab_svd(t, k, algorithm),
    }
}

/// Correspondence analysis: weighted SVD of the Pearson-contrast
/// triplet. Squared dispersions are the principal inertias.
pub fn ca(table: &ContingencyTable, k: usize) -> Result<Decomposition> {
    let p = normalize(table)?;
    weighted_svd(&pearson_contrast(&p)?, k)
}

/// Taxicab correspondence analysis: L1 factorization of the same
/// triplet as [`ca`].
pub fn tca(
    table: &ContingencyTable,
    k: usize,
    algorithm: crate::decomp::TaxicabAlgorithm,
) -> Result<Decomposition> {
    let p = normalize(table)?;
    taxicab_svd(&pearson_contrast(&p)?, k, algorithm)
}

/// Log-ratio analysis under prespecified weights; requires a strictly
/// positive table. Uniform weights give the scale-invariant uwLRA
/// (or uwTLRA with the taxicab method).
pub fn lra(
    table: &ContingencyTable,
    weights: &WeightScheme,
    method: Method,
    k: usize,
) -> Result<Decomposition> {
    let p = normalize(table)?;
    factorize(&log_interaction(&p, weights)?, method, k)
}

/// Interbattery (covariance) analysis: weighted SVD of
/// `(IJ sigma, 1/I, 1/J)`.
pub fn covariance_analysis(table: &ContingencyTable, k: usize) -> Result<Decomposition> {
    let p = normalize(table)?;
    weighted_svd(&covariance_residuals(&p)?, k)
}

/// A probability table rescaled to uniform marginals, together with the
/// scales that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct BalancedTable {
    pub q: DMatrix<f64>,
    pub a: DVector<f64>,
    pub b: DVector<f64>,
    pub iterations: usize,
    pub residual: f64,
}

/// Alternating proportional scaling of a strictly positive probability
/// table until every row marginal is `1/I` and every column marginal
/// `1/J` within `tol`. The balanced table is the unique
/// `q_ij = a_i p_ij b_j` with uniform marginals, and it keeps the
/// uniform-weight log interaction of `p` unchanged.
pub fn balance_to_uniform(
    p: &CorrespondenceMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<BalancedTable> {
    let (nrows, ncols) = (p.nrows(), p.ncols());
    for j in 0..ncols {
        for i in 0..nrows {
            if p.p()[(i, j)] <= 0.0 {
                return Err(Error::NonPositiveCell { row: i, col: j });
            }
        }
    }
    let row_target = 1.0 / nrows as f64;
    let col_target = 1.0 / ncols as f64;
    let mut q = p.p().clone();
    let mut a = DVector::from_element(nrows, 1.0);
    let mut b = DVector::from_element(ncols, 1.0);
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        for i in 0..nrows {
            let factor = row_target / q.row(i).sum();
            a[i] *= factor;
            for j in 0..ncols {
                q[(i, j)] *= factor;
            }
        }
        for j in 0..ncols {
            let factor = col_target / q.column(j).sum();
            b[j] *= factor;
            for i in 0..nrows {
                q[(i, j)] *= factor;
            }
        }
        let row_dev = (0..nrows)
            .map(|i| (q.row(i).sum() - row_target).abs())
            .fold(0.0f64, f64::max);
        let col_dev = (0..ncols)
            .map(|j| (q.column(j).sum() - col_target).abs())
            .fold(0.0f64, f64::max);
        residual = row_dev.max(col_dev);
        if residual <= tol {
            return Ok(BalancedTable {
                q,
                a,
                b,
                iterations: it,
                residual,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual,
    })
}

/// Marginal-free CA: balance the table to uniform marginals, then run
/// CA (or TCA) on the balanced table. The factored matrix is
/// `IJ q_ij - 1` with uniform metrics, up to the balancing tolerance,
/// which makes the result invariant under row and column rescaling of
/// the input.
pub fn mfca(table: &ContingencyTable, method: Method, k: usize) -> Result<Decomposition> {
    mfca_with(table, method, k, BALANCE_TOL, BALANCE_MAX_ITER)
}

/// [`mfca`] with explicit balancing controls.
pub fn mfca_with(
    table: &ContingencyTable,
    method: Method,
    k: usize,
    tol: f64,
    max_iter: usize,
) -> Result<Decomposition> {
    let p = normalize(table)?;
    let balanced = balance_to_uniform(&p, tol, max_iter)?;
    let pq = CorrespondenceMatrix::from_probabilities(balanced.q, p.grand_total())?;
    factorize(&covariance_residuals(&pq)?, method, k)
}

fn check_zero_count(m: usize, rows: usize) -> Result<()> {
    if m < 1 || m + 1 > rows {
        return Err(Error::BadZeroCount {
            m,
            max: rows.saturating_sub(1),
        });
    }
    Ok(())
}

/// Closed-form first principal inertia `m / (IJ)` of the CA of an
/// indicator table with `m` zeros in one column.
pub fn lemma2_ca_inertia(m: usize, rows: usize, cols: usize) -> Result<f64> {
    check_zero_count(m, rows)?;
    Ok(m as f64 / (rows as f64 * cols as f64))
}

/// Closed-form first taxicab dispersion
/// `4 m (J-1) (I-m) / (IJ - m)^2` of the same table.
pub fn lemma2_tca_dispersion(m: usize, rows: usize, cols: usize) -> Result<f64> {
    check_zero_count(m, rows)?;
    let (i, j, m) = (rows as f64, cols as f64, m as f64);
    Ok(4.0 * m * (j - 1.0) * (i - m) / (i * j - m).powi(2))
}

/// Squared correlation of a 2 x 2 probability table:
/// `(p11 p22 - p12 p21)^2 / (p1+ p2+ p+1 p+2)`. Equals the single CA
/// principal inertia.
pub fn two_by_two_rho2(p: &CorrespondenceMatrix) -> Result<f64> {
    if p.nrows() != 2 || p.ncols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: "2x2".into(),
            found: format!("{}x{}", p.nrows(), p.ncols()),
        });
    }
    let m = p.p();
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let r = p.row_marginals();
    let c = p.col_marginals();
    Ok(det * det / (r[0] * r[1] * c[0] * c[1]))
}

/// One row of the convergence laboratory: how far the powered Pearson
/// contrast (divided by the power) sits from the uniform-weight log
/// interaction, and how far the powered marginals sit from uniform.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub alpha: f64,
    pub max_err_lambda: f64,
    pub max_err_row_marginal: f64,
    pub max_err_col_marginal: f64,
}

/// For each power in `alphas`, compares `Delta^(alpha) / alpha` against
/// the uniform-weight log interaction of the untransformed table. The
/// table must be strictly positive; errors shrink linearly as the power
/// goes to zero.
pub fn convergence_sweep(table: &ContingencyTable, alphas: &[f64]) -> Result<Vec<ConvergenceRow>> {
    for j in 0..table.ncols() {
        for i in 0..table.nrows() {
            if table.get(i, j) <= 0.0 {
                return Err(Error::NonPositiveCell { row: i, col: j });
            }
        }
    }
    for &alpha in alphas {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidAlpha(alpha));
        }
    }
    let p = normalize(table)?;
    let uniform = make_weights(WeightKind::Uniform, &p, None)?;
    let lambda = log_interaction(&p, &uniform)?;
    let row_target = 1.0 / table.nrows() as f64;
    let col_target = 1.0 / table.ncols() as f64;

    let mut rows = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let pa = normalize(&power_transform(table, alpha)?)?;
        let contrast = pearson_contrast(&pa)?;
        let max_err_lambda = (contrast.tau() / alpha - lambda.tau()).abs().max();
        let max_err_row_marginal = pa
            .row_marginals()
            .iter()
            .map(|&x| (x - row_target).abs())
            .fold(0.0f64, f64::max);
        let max_err_col_marginal = pa
            .col_marginals()
            .iter()
            .map(|&x| (x - col_target).abs())
            .fold(0.0f64, f64::max);
        rows.push(ConvergenceRow {
            alpha,
            max_err_lambda,
            max_err_row_marginal,
            max_err_col_marginal,
        });
    }
    Ok(rows)
}
