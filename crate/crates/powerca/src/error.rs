use thiserror::Error;

/// Which side of a table a marginal belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarginAxis {
    Row,
    Column,
}

impl std::fmt::Display for MarginAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MarginAxis::Row => write!(f, "row"),
            MarginAxis::Column => write!(f, "column"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid table: {0}")]
    InvalidTable(String),

    #[error("{axis} {index} sums to zero; the metric matrix is not positive definite")]
    ZeroMarginal { index: usize, axis: MarginAxis },

    #[error("weights must be strictly positive")]
    NonPositiveWeight,

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("power exponent {0} outside (0, 1]")]
    InvalidAlpha(f64),

    #[error("entry ({row}, {col}) is not strictly positive; log transform undefined")]
    NonPositiveEntry { row: usize, col: usize },

    #[error("cell ({row}, {col}) is not strictly positive; log-ratio interaction undefined")]
    NonPositiveCell { row: usize, col: usize },

    #[error("zero count m = {m} outside [1, {max}]")]
    BadZeroCount { m: usize, max: usize },

    #[error("weighted grand mean is zero; multiplicative centering undefined")]
    ZeroGrandMean,

    #[error("matrix has no nonzero entry")]
    ZeroMatrix,

    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("decomposition was built from a {found} triplet, expected {expected}")]
    MismatchedSource { expected: String, found: String },

    #[error("matrix violates double centering: residual {residual:.3e} exceeds {tolerance:.3e}")]
    CenteringViolation { residual: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("singular value decomposition did not converge")]
    SvdNoConvergence,
}

pub type Result<T> = std::result::Result<T, Error>;
