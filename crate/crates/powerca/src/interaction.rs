//! The three interaction indices (covariance residuals, Pearson
//! contrast, weighted log interaction) and the two generic
//! double-centering operators.

use nalgebra::{DMatrix, DVector};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::table::CorrespondenceMatrix;
use crate::triplet::{max_abs, IndexKind, Triplet};
use crate::weights::WeightScheme;

/// Raw covariance residuals `sigma_ij = p_ij - p_i+ p_+j`.
pub fn sigma(p: &CorrespondenceMatrix) -> DMatrix<f64> {
    let r = p.row_marginals();
    let c = p.col_marginals();
    DMatrix::from_fn(p.nrows(), p.ncols(), |i, j| p.p()[(i, j)] - r[i] * c[j])
}

/// The covariance triplet `(IJ * sigma, 1/I, 1/J)`.
pub fn covariance_residuals(p: &CorrespondenceMatrix) -> Result<Triplet> {
    let (nrows, ncols) = (p.nrows(), p.ncols());
    let scale = (nrows * ncols) as f64;
    let tau = sigma(p) * scale;
    Triplet::new(
        tau,
        DVector::from_element(nrows, 1.0 / nrows as f64),
        DVector::from_element(ncols, 1.0 / ncols as f64),
        IndexKind::Covariance,
    )
}

/// The CA triplet: Pearson contrast `p_ij/(p_i+ p_+j) - 1` with
/// marginal metrics.
pub fn pearson_contrast(p: &CorrespondenceMatrix) -> Result<Triplet> {
    let r = p.row_marginals();
    let c = p.col_marginals();
    let tau = DMatrix::from_fn(p.nrows(), p.ncols(), |i, j| {
        p.p()[(i, j)] / (r[i] * c[j]) - 1.0
    });
    Triplet::new(tau, r.clone(), c.clone(), IndexKind::PearsonContrast)
}

/// Log-probabilities `G_ij = log p_ij` bundled with the weights that
/// define their means; constructible only when every cell is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct LogInteractionInputs {
    g: DMatrix<f64>,
    weights: WeightScheme,
}

impl LogInteractionInputs {
    pub fn new(p: &CorrespondenceMatrix, weights: &WeightScheme) -> Result<Self> {
        if weights.row_weights().len() != p.nrows() || weights.col_weights().len() != p.ncols() {
            return Err(Error::DimensionMismatch {
                expected: format!("weights of lengths {} and {}", p.nrows(), p.ncols()),
                found: format!(
                    "{} and {}",
                    weights.row_weights().len(),
                    weights.col_weights().len()
                ),
            });
        }
        for j in 0..p.ncols() {
            for i in 0..p.nrows() {
                if p.p()[(i, j)] <= 0.0 {
                    return Err(Error::NonPositiveCell { row: i, col: j });
                }
            }
        }
        Ok(Self {
            g: p.p().map(f64::ln),
            weights: weights.clone(),
        })
    }

    pub fn g(&self) -> &DMatrix<f64> {
        &self.g
    }

    /// Weighted row means `G_i+ = sum_j G_ij w^C_j`.
    pub fn row_means(&self) -> DVector<f64> {
        weighted_row_means(&self.g, self.weights.col_weights())
    }

    /// Weighted column means `G_+j = sum_i G_ij w^R_i`.
    pub fn col_means(&self) -> DVector<f64> {
        weighted_col_means(&self.g, self.weights.row_weights())
    }

    /// Weighted grand mean `G_++`.
    pub fn grand_mean(&self) -> f64 {
        weighted_grand_mean(
            &self.g,
            self.weights.row_weights(),
            self.weights.col_weights(),
        )
    }
}

fn weighted_row_means(y: &DMatrix<f64>, col_w: &DVector<f64>) -> DVector<f64> {
    DVector::from_fn(y.nrows(), |i, _| {
        (0..y.ncols()).map(|j| y[(i, j)] * col_w[j]).sum()
    })
}

fn weighted_col_means(y: &DMatrix<f64>, row_w: &DVector<f64>) -> DVector<f64> {
    DVector::from_fn(y.ncols(), |j, _| {
        (0..y.nrows()).map(|i| y[(i, j)] * row_w[i]).sum()
    })
}

fn weighted_grand_mean(y: &DMatrix<f64>, row_w: &DVector<f64>, col_w: &DVector<f64>) -> f64 {
    (0..y.ncols())
        .map(|j| col_w[j] * (0..y.nrows()).map(|i| y[(i, j)] * row_w[i]).sum::<f64>())
        .sum()
}

/// The LRA triplet: `lambda = G_ij - G_i+ - G_+j + G_++` under the given
/// weights, computed by additive centering of `log p` for numerical
/// stability. Uniform weights give the scale-invariant uwLRA index.
pub fn log_interaction(p: &CorrespondenceMatrix, weights: &WeightScheme) -> Result<Triplet> {
    let inputs = LogInteractionInputs::new(p, weights)?;
    let tau = additive_center(inputs.g(), weights.row_weights(), weights.col_weights());
    Triplet::new(
        tau,
        weights.row_weights().clone(),
        weights.col_weights().clone(),
        IndexKind::LogInteraction,
    )
}

/// Additive double centering `Y_ij - Y_i+ - Y_+j + Y_++` with weighted
/// means. Invariant to adding row or column constants.
pub fn additive_center(
    y: &DMatrix<f64>,
    row_weights: &DVector<f64>,
    col_weights: &DVector<f64>,
) -> DMatrix<f64> {
    let row_means = weighted_row_means(y, col_weights);
    let col_means = weighted_col_means(y, row_weights);
    let grand = weighted_grand_mean(y, row_weights, col_weights);
    DMatrix::from_fn(y.nrows(), y.ncols(), |i, j| {
        y[(i, j)] - row_means[i] - col_means[j] + grand
    })
}

/// Multiplicative double centering `Y_ij - Y_i+ Y_+j / Y_++`; drops the
/// rank by exactly one.
pub fn multiplicative_center(
    y: &DMatrix<f64>,
    row_weights: &DVector<f64>,
    col_weights: &DVector<f64>,
) -> Result<DMatrix<f64>> {
    let row_means = weighted_row_means(y, col_weights);
    let col_means = weighted_col_means(y, row_weights);
    let grand = weighted_grand_mean(y, row_weights, col_weights);
    if grand.abs() <= Tolerances::DEFAULT.zero_grand_mean * max_abs(y) {
        return Err(Error::ZeroGrandMean);
    }
    Ok(DMatrix::from_fn(y.nrows(), y.ncols(), |i, j| {
        y[(i, j)] - row_means[i] * col_means[j] / grand
    }))
}

/// First-order expansion of the log interaction:
/// `p_ij/(w^R_i w^C_j) - p_i+/w^R_i - p_+j/w^C_j + 1`.
///
/// With uniform weights this is `IJ p_ij + 1 - I p_i+ - J p_+j`, the
/// middle layer of the approximation chain linking the powered Pearson
/// contrast to the log interaction.
pub fn first_order_approx(p: &CorrespondenceMatrix, weights: &WeightScheme) -> DMatrix<f64> {
    let r = p.row_marginals();
    let c = p.col_marginals();
    let wr = weights.row_weights();
    let wc = weights.col_weights();
    DMatrix::from_fn(p.nrows(), p.ncols(), |i, j| {
        p.p()[(i, j)] / (wr[i] * wc[j]) - r[i] / wr[i] - c[j] / wc[j] + 1.0
    })
}
