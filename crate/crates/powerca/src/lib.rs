//! Correspondence analysis (CA), taxicab correspondence analysis (TCA)
//! and log-ratio analysis (LRA) of contingency and compositional
//! tables, with the power-transform preprocessing that connects them:
//! as the power goes to zero, CA of the powered table approaches the
//! uniformly weighted log-ratio analysis on strictly positive data, and
//! the 0/1 indicator pattern takes over when zeros are present.
//!
//! The pipeline is triplet-based: every analysis builds an interaction
//! matrix plus row/column metrics, then factorizes it by weighted SVD
//! or by taxicab SVD (L1 maximization over sign vectors with rank-one
//! deflation).

pub mod analyses;
pub mod axis;
pub mod config;
pub mod decomp;
pub mod error;
pub mod interaction;
pub mod table;
pub mod transform;
pub mod triplet;
pub mod weights;

pub use analyses::{
    balance_to_uniform, ca, convergence_sweep, covariance_analysis, lemma2_ca_inertia,
    lemma2_tca_dispersion, lra, mfca, mfca_with, tca, two_by_two_rho2, BalancedTable,
    ConvergenceRow,
};
pub use axis::{Axis, DecompMethod, Decomposition};
pub use config::{Tolerances, BALANCE_MAX_ITER, BALANCE_TOL, DEFAULT_ALPHA_GRID};
pub use decomp::{
    ca_reconstruct, lra_reconstruct, reconstruct, taxicab_axis, taxicab_svd, weighted_svd,
    CrossCovariance, Method, TaxicabAlgorithm, TaxicabAxis,
};
pub use error::{Error, MarginAxis, Result};
pub use interaction::{
    additive_center, covariance_residuals, first_order_approx, log_interaction,
    multiplicative_center, pearson_contrast, sigma, LogInteractionInputs,
};
pub use table::{normalize, ContingencyTable, CorrespondenceMatrix};
pub use transform::{
    indicator, log_transform, merge_proportional, one_zero_column_reduction, power_transform,
    zero_stats, MergeReport, ZeroStats,
};
pub use triplet::{IndexKind, Triplet};
pub use weights::{make_weights, WeightKind, WeightScheme};
