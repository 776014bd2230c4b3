//! Factorization of a triplet by weighted SVD or by taxicab SVD
//! (L1-norm maximization with rank-one deflation), plus the
//! reconstruction formulas.

use nalgebra::{DMatrix, DVector};

use crate::axis::{Axis, DecompMethod, Decomposition};
use crate::config::{Tolerances, EXHAUSTIVE_LIMIT};
use crate::error::{Error, Result};
use crate::table::CorrespondenceMatrix;
use crate::triplet::{max_abs, IndexKind, Triplet};

/// How the taxicab sign-vector search runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaxicabAlgorithm {
    /// Enumerates all sign vectors over the shorter dimension; exact.
    Exhaustive,
    /// Alternating sign ascent restarted from every row pattern; a
    /// local optimum validated against the exhaustive oracle in tests.
    Ascent,
    /// Exhaustive when `min(I, J) <= 20`, ascent otherwise.
    Auto,
}

impl TaxicabAlgorithm {
    fn resolve(self, nrows: usize, ncols: usize) -> TaxicabAlgorithm {
        match self {
            TaxicabAlgorithm::Auto => {
                if nrows.min(ncols) <= EXHAUSTIVE_LIMIT {
                    TaxicabAlgorithm::Exhaustive
                } else {
                    TaxicabAlgorithm::Ascent
                }
            }
            other => other,
        }
    }
}

impl std::fmt::Display for TaxicabAlgorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TaxicabAlgorithm::Exhaustive => write!(f, "exhaustive"),
            TaxicabAlgorithm::Ascent => write!(f, "ascent"),
            TaxicabAlgorithm::Auto => write!(f, "auto"),
        }
    }
}

/// Factorization method requested from the analysis presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Svd,
    Taxicab(TaxicabAlgorithm),
}

/// The cross-covariance form `S_ij = m^r_i m^c_j tau_ij` of a triplet;
/// for CA triplets this is exactly the residual matrix `sigma`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossCovariance {
    s: DMatrix<f64>,
}

impl CrossCovariance {
    /// Validates that plain row and column sums vanish (scaled by
    /// `max|S|`).
    pub fn new(s: DMatrix<f64>) -> Result<Self> {
        let tolerance =
            Tolerances::DEFAULT.centering * max_abs(&s) + Tolerances::CENTERING_ABS_GUARD;
        let residual = plain_centering_residual(&s);
        if residual > tolerance {
            return Err(Error::CenteringViolation {
                residual,
                tolerance,
            });
        }
        Ok(Self { s })
    }

    pub fn from_triplet(t: &Triplet) -> Self {
        let (mr, mc) = (t.row_metric(), t.col_metric());
        let s = DMatrix::from_fn(t.nrows(), t.ncols(), |i, j| mr[i] * mc[j] * t.tau()[(i, j)]);
        Self { s }
    }

    pub fn s(&self) -> &DMatrix<f64> {
        &self.s
    }
}

fn plain_centering_residual(s: &DMatrix<f64>) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..s.ncols() {
        worst = worst.max(s.column(j).sum().abs());
    }
    for i in 0..s.nrows() {
        worst = worst.max(s.row(i).sum().abs());
    }
    worst
}

fn dispersion_floor(max_abs_tau: f64) -> f64 {
    Tolerances::DEFAULT.rank_floor * (1.0 + max_abs_tau)
}

struct JacobiSvd {
    u: DMatrix<f64>,
    sigma: DVector<f64>,
    v: DMatrix<f64>,
}

const JACOBI_EPS: f64 = 1e-15;
const JACOBI_MAX_SWEEPS: usize = 60;

/// One-sided Jacobi (Hestenes) SVD: rotates column pairs of the tall
/// form until all columns are mutually orthogonal. The condition suites
/// need singular values at full relative accuracy, which this method
/// guarantees on small dense matrices. Returns
/// `w = u * diag(sigma) * v^T` with `sigma` sorted descending.
fn jacobi_svd(w: &DMatrix<f64>) -> Result<JacobiSvd> {
    if w.nrows() < w.ncols() {
        let t = jacobi_svd(&w.transpose())?;
        return Ok(JacobiSvd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        });
    }
    let ncols = w.ncols();
    let mut a = w.clone();
    let mut v = DMatrix::<f64>::identity(ncols, ncols);
    // columns below noise level hold no retainable axis and would keep
    // the relative criterion from ever being met
    let noise = (JACOBI_EPS * w.norm()).powi(2);

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..ncols {
            for q in (p + 1)..ncols {
                let col_p = a.column(p);
                let col_q = a.column(q);
                let alpha = col_p.dot(&col_p);
                let beta = col_q.dot(&col_q);
                if alpha <= noise || beta <= noise {
                    continue;
                }
                let gamma = col_p.dot(&col_q);
                if gamma.abs() <= JACOBI_EPS * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..a.nrows() {
                    let (ap, aq) = (a[(i, p)], a[(i, q)]);
                    a[(i, p)] = c * ap - s * aq;
                    a[(i, q)] = s * ap + c * aq;
                }
                for i in 0..ncols {
                    let (vp, vq) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::SvdNoConvergence);
    }

    let mut order: Vec<usize> = (0..ncols).collect();
    let norms: Vec<f64> = (0..ncols).map(|j| a.column(j).norm()).collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).unwrap().then(x.cmp(&y)));

    let mut u = DMatrix::zeros(w.nrows(), ncols);
    let mut sigma = DVector::zeros(ncols);
    let mut v_sorted = DMatrix::zeros(ncols, ncols);
    for (slot, &j) in order.iter().enumerate() {
        sigma[slot] = norms[j];
        if norms[j] > 0.0 {
            u.set_column(slot, &(a.column(j) / norms[j]));
        }
        v_sorted.set_column(slot, &v.column(j));
    }
    Ok(JacobiSvd {
        u,
        sigma,
        v: v_sorted,
    })
}

fn canonicalize_svd_axis(axis: &mut Axis) {
    if !axis.sign_canonical() {
        axis.f.neg_mut();
        axis.g.neg_mut();
    }
}

/// Weighted singular value decomposition of a triplet.
///
/// The factorization runs on `W = D_r^(1/2) tau D_c^(1/2)` so that the
/// weighted orthogonality conditions reduce to plain orthogonality of
/// the singular vectors. Returns at most `min(I, J) - 1` axes; rank
/// deficiency shows up as fewer axes, never as an error.
pub fn weighted_svd(t: &Triplet, k: usize) -> Result<Decomposition> {
    let (nrows, ncols) = (t.nrows(), t.ncols());
    let sqrt_r = t.row_metric().map(f64::sqrt);
    let sqrt_c = t.col_metric().map(f64::sqrt);
    let w = DMatrix::from_fn(nrows, ncols, |i, j| sqrt_r[i] * t.tau()[(i, j)] * sqrt_c[j]);

    let svd = jacobi_svd(&w)?;

    let limit = k.min(nrows.min(ncols).saturating_sub(1));
    let floor = dispersion_floor(t.max_abs_tau());
    let mut axes = Vec::new();
    let delta1 = svd.sigma[0];
    for idx in 0..limit {
        let delta = svd.sigma[idx];
        if delta <= floor || delta <= Tolerances::DEFAULT.rank_cutoff * delta1 {
            break;
        }
        let f = DVector::from_fn(nrows, |i, _| delta * svd.u[(i, idx)] / sqrt_r[i]);
        let g = DVector::from_fn(ncols, |j, _| delta * svd.v[(j, idx)] / sqrt_c[j]);
        let mut axis = Axis {
            f,
            g,
            delta,
            u: None,
            v: None,
        };
        canonicalize_svd_axis(&mut axis);
        axes.push(axis);
    }

    let mut d = Decomposition {
        axes,
        method: DecompMethod::Svd,
        source: t.kind(),
        residual_norm: 0.0,
        nrows,
        ncols,
    };
    d.residual_norm = max_abs(&(t.tau() - reconstruct(&d, d.rank())));
    Ok(d)
}

/// One taxicab principal axis: the optimizing sign vectors together
/// with the axis vectors `a = S u`, `b = S' v` and the dispersion
/// `delta = ||S u||_1 = sum_j u_j b_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaxicabAxis {
    pub u: DVector<f64>,
    pub v: DVector<f64>,
    pub a: DVector<f64>,
    pub b: DVector<f64>,
    pub delta: f64,
}

fn sign_vector(x: &DVector<f64>) -> DVector<f64> {
    // sign(0) resolves to +1 for determinism
    x.map(|v| if v < 0.0 { -1.0 } else { 1.0 })
}

fn l1_norm(x: &DVector<f64>) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}

/// Completes the output contract from a candidate sign vector `u`.
fn finalize_axis(s: &DMatrix<f64>, u: DVector<f64>) -> TaxicabAxis {
    let a = s * &u;
    let v = sign_vector(&a);
    let b = s.transpose() * &v;
    let delta = l1_norm(&a);
    TaxicabAxis { u, v, a, b, delta }
}

/// Iterates the sign patterns of length `len` with the first entry
/// pinned to +1 (the objective is invariant under a global flip).
fn sign_patterns(len: usize) -> impl Iterator<Item = DVector<f64>> {
    let count: u64 = 1 << (len - 1);
    (0..count).map(move |mask| {
        DVector::from_fn(len, |i, _| {
            if i == 0 || mask >> (i - 1) & 1 == 0 {
                1.0
            } else {
                -1.0
            }
        })
    })
}

fn exhaustive_search(s: &DMatrix<f64>) -> DVector<f64> {
    let (nrows, ncols) = (s.nrows(), s.ncols());
    if ncols <= nrows {
        let mut best: Option<(f64, DVector<f64>)> = None;
        for u in sign_patterns(ncols) {
            let objective = l1_norm(&(s * &u));
            if best.as_ref().is_none_or(|(b, _)| objective > *b) {
                best = Some((objective, u));
            }
        }
        best.expect("at least one pattern").1
    } else {
        // enumerate over the shorter (row) side, then read u off S'v
        let st = s.transpose();
        let mut best: Option<(f64, DVector<f64>)> = None;
        for v in sign_patterns(nrows) {
            let objective = l1_norm(&(&st * &v));
            if best.as_ref().is_none_or(|(b, _)| objective > *b) {
                best = Some((objective, v));
            }
        }
        let v = best.expect("at least one pattern").1;
        sign_vector(&(&st * &v))
    }
}

const ASCENT_MAX_SWEEPS: usize = 500;

fn ascent_from(s: &DMatrix<f64>, st: &DMatrix<f64>, mut u: DVector<f64>) -> DVector<f64> {
    for _ in 0..ASCENT_MAX_SWEEPS {
        let v = sign_vector(&(s * &u));
        let next = sign_vector(&(st * &v));
        if next == u {
            break;
        }
        u = next;
    }
    u
}

/// Restarted alternating ascent with one- and two-flip deepening.
///
/// Starts from the sign pattern of every row and from the pattern
/// induced by every column, keeps the best fixed point (first on ties),
/// then repeatedly re-ascends from sign flips of the incumbent until no
/// single or pair flip improves the objective. Deterministic, and
/// validated against the exhaustive oracle on small matrices.
fn ascent_search(s: &DMatrix<f64>) -> DVector<f64> {
    let st = s.transpose();
    let ncols = s.ncols();

    let mut starts: Vec<DVector<f64>> = (0..s.nrows())
        .map(|i| sign_vector(&s.row(i).transpose()))
        .collect();
    starts.extend((0..ncols).map(|j| {
        let v = sign_vector(&s.column(j).clone_owned());
        sign_vector(&(&st * v))
    }));

    let mut best: Option<(f64, DVector<f64>)> = None;
    for start in starts {
        let u = ascent_from(s, &st, start);
        let objective = l1_norm(&(s * &u));
        if best.as_ref().is_none_or(|(b, _)| objective > *b) {
            best = Some((objective, u));
        }
    }
    let (mut best_obj, mut best_u) = best.expect("at least one restart");

    let mut neighborhoods: Vec<Vec<usize>> = (0..ncols).map(|j| vec![j]).collect();
    for a in 0..ncols {
        for b in (a + 1)..ncols {
            neighborhoods.push(vec![a, b]);
        }
    }
    'deepen: loop {
        for flips in &neighborhoods {
            let mut candidate = best_u.clone();
            for &j in flips {
                candidate[j] = -candidate[j];
            }
            let u = ascent_from(s, &st, candidate);
            let objective = l1_norm(&(s * &u));
            if objective > best_obj {
                best_obj = objective;
                best_u = u;
                continue 'deepen;
            }
        }
        break;
    }
    best_u
}

/// Extracts one taxicab axis from a cross-covariance matrix by
/// maximizing `||S u||_1` over sign vectors `u`.
pub fn taxicab_axis(s: &CrossCovariance, algorithm: TaxicabAlgorithm) -> Result<TaxicabAxis> {
    taxicab_axis_of(s.s(), algorithm)
}

fn taxicab_axis_of(s: &DMatrix<f64>, algorithm: TaxicabAlgorithm) -> Result<TaxicabAxis> {
    if max_abs(s) == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let u = match algorithm.resolve(s.nrows(), s.ncols()) {
        TaxicabAlgorithm::Exhaustive => exhaustive_search(s),
        TaxicabAlgorithm::Ascent => ascent_search(s),
        TaxicabAlgorithm::Auto => unreachable!("resolved above"),
    };
    Ok(finalize_axis(s, u))
}

/// Taxicab SVD: extract an axis, deflate `S <- S - a b' / delta`,
/// repeat. Principal coordinates are `f = a / m^r` and `g = b / m^c`
/// elementwise.
pub fn taxicab_svd(t: &Triplet, k: usize, algorithm: TaxicabAlgorithm) -> Result<Decomposition> {
    let (nrows, ncols) = (t.nrows(), t.ncols());
    let mut s = CrossCovariance::from_triplet(t).s.clone();
    let s_scale = max_abs(&s);
    let centering_budget =
        Tolerances::DEFAULT.centering * s_scale + Tolerances::CENTERING_ABS_GUARD;
    let floor = dispersion_floor(t.max_abs_tau());
    let limit = k.min(nrows.min(ncols).saturating_sub(1));

    let mut axes: Vec<Axis> = Vec::new();
    let mut delta1 = None;
    while axes.len() < limit {
        if max_abs(&s) == 0.0 {
            break;
        }
        let mut axis = taxicab_axis_of(&s, algorithm)?;
        let keep = match delta1 {
            None => axis.delta > floor,
            Some(d1) => axis.delta > floor && axis.delta > Tolerances::DEFAULT.rank_cutoff * d1,
        };
        if !keep {
            break;
        }
        if delta1.is_none() {
            delta1 = Some(axis.delta);
        }

        let f = axis.a.component_div(t.row_metric());
        // sign convention: flip the whole extraction, not the outputs,
        // so the contract identities keep holding exactly
        let mut imax = 0;
        for i in 1..f.len() {
            if f[i].abs() > f[imax].abs() {
                imax = i;
            }
        }
        if f[imax] < 0.0 {
            axis = finalize_axis(&s, -axis.u);
        }
        let f = axis.a.component_div(t.row_metric());
        let g = axis.b.component_div(t.col_metric());

        // rank-one deflation
        let outer = &axis.a * axis.b.transpose();
        s -= outer / axis.delta;
        let drift = plain_centering_residual(&s);
        if drift > centering_budget {
            return Err(Error::CenteringViolation {
                residual: drift,
                tolerance: centering_budget,
            });
        }

        axes.push(Axis {
            f,
            g,
            delta: axis.delta,
            u: Some(axis.u),
            v: Some(axis.v),
        });
    }

    let mut d = Decomposition {
        axes,
        method: DecompMethod::Taxicab,
        source: t.kind(),
        residual_norm: 0.0,
        nrows,
        ncols,
    };
    d.residual_norm = max_abs(&(t.tau() - reconstruct(&d, d.rank())));
    Ok(d)
}

/// Rank-`k` partial sum `sum_a f_a(i) g_a(j) / delta_a`.
///
/// Panics when `k` exceeds the number of retained axes.
pub fn reconstruct(d: &Decomposition, k: usize) -> DMatrix<f64> {
    assert!(
        k <= d.rank(),
        "requested {k} axes, decomposition has {}",
        d.rank()
    );
    let mut out = DMatrix::zeros(d.nrows, d.ncols);
    for axis in d.axes.iter().take(k) {
        out += &axis.f * axis.g.transpose() / axis.delta;
    }
    out
}

fn expect_source(d: &Decomposition, expected: IndexKind) -> Result<()> {
    if d.source != expected {
        return Err(Error::MismatchedSource {
            expected: expected.to_string(),
            found: d.source.to_string(),
        });
    }
    Ok(())
}

fn expect_shape(p: &CorrespondenceMatrix, d: &Decomposition) -> Result<()> {
    if p.nrows() != d.nrows || p.ncols() != d.ncols {
        return Err(Error::DimensionMismatch {
            expected: format!("{}x{}", d.nrows, d.ncols),
            found: format!("{}x{}", p.nrows(), p.ncols()),
        });
    }
    Ok(())
}

/// Rank-`k` probability reconstruction
/// `p_ij = p_i+ p_+j (1 + sum_a f g / delta)` from a Pearson-contrast
/// decomposition. `k = 0` returns the independence table.
pub fn ca_reconstruct(
    p: &CorrespondenceMatrix,
    d: &Decomposition,
    k: usize,
) -> Result<DMatrix<f64>> {
    expect_source(d, IndexKind::PearsonContrast)?;
    expect_shape(p, d)?;
    let bilinear = reconstruct(d, k);
    let r = p.row_marginals();
    let c = p.col_marginals();
    Ok(DMatrix::from_fn(d.nrows, d.ncols, |i, j| {
        r[i] * c[j] * (1.0 + bilinear[(i, j)])
    }))
}

/// Rank-`k` reconstruction
/// `p_ij = p_+j/I + p_i+/J - 1/(IJ) + sum_a f g / delta` from an
/// additively centered (uniform-weight) decomposition: additive main
/// effects plus bilinear interactions. `k = 0` returns the additive
/// fit.
pub fn lra_reconstruct(
    p: &CorrespondenceMatrix,
    d: &Decomposition,
    k: usize,
) -> Result<DMatrix<f64>> {
    expect_source(d, IndexKind::AdditiveCentered)?;
    expect_shape(p, d)?;
    let bilinear = reconstruct(d, k);
    let r = p.row_marginals();
    let c = p.col_marginals();
    let (ni, nj) = (d.nrows as f64, d.ncols as f64);
    Ok(DMatrix::from_fn(d.nrows, d.ncols, |i, j| {
        c[j] / ni + r[i] / nj - 1.0 / (ni * nj) + bilinear[(i, j)]
    }))
}
