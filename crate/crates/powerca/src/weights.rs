//! Row and column weight schemes for the log-ratio interaction.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::table::CorrespondenceMatrix;

const WEIGHT_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    /// Data-dependent weights `(p_{i+}, p_{+j})`.
    Marginal,
    /// `(1/I, 1/J)`; this choice makes the log-ratio analysis scale
    /// invariant.
    Uniform,
    /// Caller-supplied probability vectors.
    Custom,
}

impl std::fmt::Display for WeightKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WeightKind::Marginal => write!(f, "marginal"),
            WeightKind::Uniform => write!(f, "uniform"),
            WeightKind::Custom => write!(f, "custom"),
        }
    }
}

/// Strictly positive row/column weight vectors, each summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightScheme {
    kind: WeightKind,
    row: DVector<f64>,
    col: DVector<f64>,
}

impl WeightScheme {
    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn row_weights(&self) -> &DVector<f64> {
        &self.row
    }

    pub fn col_weights(&self) -> &DVector<f64> {
        &self.col
    }
}

fn check_probability_vector(w: &DVector<f64>, what: &str) -> Result<()> {
    if w.iter().any(|&x| x <= 0.0 || !x.is_finite()) {
        return Err(Error::NonPositiveWeight);
    }
    let sum: f64 = w.iter().sum();
    if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::InvalidWeights(format!(
            "{what} weights sum to {sum}, expected 1"
        )));
    }
    Ok(())
}

/// Builds the weight scheme of the requested kind for a correspondence
/// matrix. `custom` is consulted only for [`WeightKind::Custom`] and
/// must already be normalized.
pub fn make_weights(
    kind: WeightKind,
    p: &CorrespondenceMatrix,
    custom: Option<(DVector<f64>, DVector<f64>)>,
) -> Result<WeightScheme> {
    let (nrows, ncols) = (p.nrows(), p.ncols());
    let (row, col) = match kind {
        WeightKind::Marginal => (p.row_marginals().clone(), p.col_marginals().clone()),
        WeightKind::Uniform => (
            DVector::from_element(nrows, 1.0 / nrows as f64),
            DVector::from_element(ncols, 1.0 / ncols as f64),
        ),
        WeightKind::Custom => {
            let (row, col) = custom.ok_or_else(|| {
                Error::InvalidWeights("custom kind requires explicit weight vectors".into())
            })?;
            if row.len() != nrows || col.len() != ncols {
                return Err(Error::DimensionMismatch {
                    expected: format!("weights of lengths {nrows} and {ncols}"),
                    found: format!("{} and {}", row.len(), col.len()),
                });
            }
            (row, col)
        }
    };
    check_probability_vector(&row, "row")?;
    check_probability_vector(&col, "column")?;
    Ok(WeightScheme { kind, row, col })
}
