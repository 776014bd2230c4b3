//! Principal axes and complete decompositions.

use nalgebra::DVector;

use crate::triplet::IndexKind;

/// One principal dimension of a factorization.
///
/// `f` holds row principal coordinates, `g` column principal
/// coordinates and `delta` the dispersion of the axis (singular value
/// for the SVD, L1 objective value for the taxicab factorization). The
/// optimizing sign vectors `u` (length J) and `v` (length I) are kept
/// for taxicab axes only.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub f: DVector<f64>,
    pub g: DVector<f64>,
    pub delta: f64,
    pub u: Option<DVector<f64>>,
    pub v: Option<DVector<f64>>,
}

impl Axis {
    /// Index of the largest-magnitude row coordinate, ties broken
    /// toward the lowest index.
    pub fn dominant_row(&self) -> usize {
        let mut imax = 0;
        for i in 1..self.f.len() {
            if self.f[i].abs() > self.f[imax].abs() {
                imax = i;
            }
        }
        imax
    }

    /// Whether the sign convention holds: the largest-|f| entry is
    /// positive.
    pub fn sign_canonical(&self) -> bool {
        self.f[self.dominant_row()] >= 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompMethod {
    Svd,
    Taxicab,
}

impl std::fmt::Display for DecompMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecompMethod::Svd => write!(f, "svd"),
            DecompMethod::Taxicab => write!(f, "taxicab"),
        }
    }
}

/// Ordered axes extracted from one triplet.
///
/// SVD axes come ordered by decreasing dispersion, taxicab axes in
/// extraction order. `residual_norm` records `max|tau - reconstruction|`
/// over the retained axes.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub axes: Vec<Axis>,
    pub method: DecompMethod,
    pub source: IndexKind,
    pub residual_norm: f64,
    pub nrows: usize,
    pub ncols: usize,
}

impl Decomposition {
    pub fn rank(&self) -> usize {
        self.axes.len()
    }

    /// Dispersions `delta_1, delta_2, ...` in axis order.
    pub fn dispersions(&self) -> Vec<f64> {
        self.axes.iter().map(|a| a.delta).collect()
    }

    /// Squared dispersions; for CA these are the principal inertias.
    pub fn principal_inertias(&self) -> Vec<f64> {
        self.axes.iter().map(|a| a.delta * a.delta).collect()
    }

    /// Dispersion of the 1-based `axis`, or 0 when the axis was dropped
    /// as rank-deficient.
    pub fn dispersion_or_zero(&self, axis: usize) -> f64 {
        assert!(axis >= 1, "axes are 1-based");
        self.axes.get(axis - 1).map_or(0.0, |a| a.delta)
    }
}
