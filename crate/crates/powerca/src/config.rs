//! Centralized tolerance constants shared by every module.

/// Numerical tolerances used throughout the crate.
///
/// All checks that compare a computed quantity against an exact
/// mathematical statement go through one of these constants so that the
/// tolerance budget of the whole pipeline can be read in one place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative bound for the double-centering residual of an
    /// interaction matrix (scaled by `max|tau|`).
    pub centering: f64,
    /// Dispersions below `rank_cutoff * delta_1` are treated as rank
    /// deficiency and dropped.
    pub rank_cutoff: f64,
    /// Absolute dispersion floor, scaled by `1 + max|tau|`. Inputs whose
    /// interaction matrix is pure floating-point noise (exactly rank-1
    /// tables, independence tables) decompose into zero axes instead of
    /// one noise axis.
    pub rank_floor: f64,
    /// Convergence threshold for iterative schemes (matrix balancing).
    pub convergence: f64,
    /// Relative cross-product bound deciding whether two lines of a
    /// table are proportional.
    pub proportionality: f64,
    /// Weighted grand means smaller than this (relative to `max|Y|`)
    /// make the multiplicative centering ill-defined.
    pub zero_grand_mean: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        centering: 1e-10,
        rank_cutoff: 1e-9,
        rank_floor: 1e-13,
        convergence: 1e-12,
        proportionality: 1e-9,
        zero_grand_mean: 1e-12,
    };

    /// Absolute slack added to scaled centering checks so that matrices
    /// living entirely at floating-point noise level are not rejected.
    pub const CENTERING_ABS_GUARD: f64 = 1e-13;
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Default maximum number of balancing sweeps.
pub const BALANCE_MAX_ITER: usize = 100_000;

/// Default balancing tolerance on the marginal residual.
pub const BALANCE_TOL: f64 = 1e-12;

/// Exhaustive taxicab search is used automatically up to this size of
/// the shorter table dimension; beyond it the ascent algorithm runs.
pub const EXHAUSTIVE_LIMIT: usize = 20;

/// Default power grid for the convergence sweep.
pub const DEFAULT_ALPHA_GRID: [f64; 5] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5];
