//! The triplet `(tau, M_I, M_J)`: a doubly centered interaction matrix
//! plus diagonal row/column metrics. Every factorization consumes one.

use nalgebra::{DMatrix, DVector};

use crate::config::Tolerances;
use crate::error::{Error, Result};

/// Which interaction index a triplet carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexKind {
    /// `tau = IJ * (p_ij - p_i+ p_+j)` with uniform metrics.
    Covariance,
    /// `tau = p_ij / (p_i+ p_+j) - 1` with marginal metrics.
    PearsonContrast,
    /// `tau = G_ij - G_i+ - G_+j + G_++` for `G = log p`, prespecified
    /// weights as metrics.
    LogInteraction,
    /// Generic additive double centering of an arbitrary matrix.
    AdditiveCentered,
    /// Generic multiplicative double centering of an arbitrary matrix.
    MultiplicativeCentered,
}

impl std::fmt::Display for IndexKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            IndexKind::Covariance => "covariance",
            IndexKind::PearsonContrast => "pearson_contrast",
            IndexKind::LogInteraction => "log_interaction",
            IndexKind::AdditiveCentered => "additive_centered",
            IndexKind::MultiplicativeCentered => "multiplicative_centered",
        };
        write!(f, "{s}")
    }
}

/// An interaction matrix with its metric weights.
///
/// Construction enforces the double-centering identity
/// `sum_i m^r_i m^c_j tau_ij = 0` for every column and the transposed
/// identity for every row, up to a tolerance scaled by `max|tau|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Triplet {
    tau: DMatrix<f64>,
    row_metric: DVector<f64>,
    col_metric: DVector<f64>,
    kind: IndexKind,
}

impl Triplet {
    pub fn new(
        tau: DMatrix<f64>,
        row_metric: DVector<f64>,
        col_metric: DVector<f64>,
        kind: IndexKind,
    ) -> Result<Self> {
        if row_metric.len() != tau.nrows() || col_metric.len() != tau.ncols() {
            return Err(Error::DimensionMismatch {
                expected: format!("metrics of lengths {} and {}", tau.nrows(), tau.ncols()),
                found: format!("{} and {}", row_metric.len(), col_metric.len()),
            });
        }
        if row_metric
            .iter()
            .chain(col_metric.iter())
            .any(|&m| m <= 0.0)
        {
            return Err(Error::NonPositiveWeight);
        }
        let residual = centering_residual(&tau, &row_metric, &col_metric);
        let tolerance =
            Tolerances::DEFAULT.centering * max_abs(&tau) + Tolerances::CENTERING_ABS_GUARD;
        if residual > tolerance {
            return Err(Error::CenteringViolation {
                residual,
                tolerance,
            });
        }
        Ok(Self {
            tau,
            row_metric,
            col_metric,
            kind,
        })
    }

    pub fn tau(&self) -> &DMatrix<f64> {
        &self.tau
    }

    pub fn row_metric(&self) -> &DVector<f64> {
        &self.row_metric
    }

    pub fn col_metric(&self) -> &DVector<f64> {
        &self.col_metric
    }

    pub fn kind(&self) -> IndexKind {
        self.kind
    }

    pub fn nrows(&self) -> usize {
        self.tau.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.tau.ncols()
    }

    pub fn max_abs_tau(&self) -> f64 {
        max_abs(&self.tau)
    }
}

pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()))
}

/// Largest violation of the weighted double-centering identity.
pub(crate) fn centering_residual(
    tau: &DMatrix<f64>,
    row_metric: &DVector<f64>,
    col_metric: &DVector<f64>,
) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..tau.ncols() {
        let s: f64 = (0..tau.nrows())
            .map(|i| row_metric[i] * col_metric[j] * tau[(i, j)])
            .sum();
        worst = worst.max(s.abs());
    }
    for i in 0..tau.nrows() {
        let s: f64 = (0..tau.ncols())
            .map(|j| row_metric[i] * col_metric[j] * tau[(i, j)])
            .sum();
        worst = worst.max(s.abs());
    }
    worst
}
