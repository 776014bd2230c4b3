//! Shared test utilities: random table strategies and the condition
//! suites that every returned decomposition must satisfy.

use nalgebra::DMatrix;
use powerca::{reconstruct, Decomposition, Triplet};

/// Checks the SVD-side conditions: dispersion identities, weighted
/// means, weighted cross-moments, and the full reconstruction.
pub fn assert_svd_conditions(t: &Triplet, d: &Decomposition, tol: f64) {
    let (mr, mc) = (t.row_metric(), t.col_metric());
    for (ai, a) in d.axes.iter().enumerate() {
        let d2 = a.delta * a.delta;
        let fsq: f64 = (0..a.f.len()).map(|i| a.f[i] * a.f[i] * mr[i]).sum();
        let gsq: f64 = (0..a.g.len()).map(|j| a.g[j] * a.g[j] * mc[j]).sum();
        assert!((fsq - d2).abs() <= tol * d2, "row dispersion identity");
        assert!((gsq - d2).abs() <= tol * d2, "col dispersion identity");
        let fmean: f64 = (0..a.f.len()).map(|i| a.f[i] * mr[i]).sum();
        let gmean: f64 = (0..a.g.len()).map(|j| a.g[j] * mc[j]).sum();
        assert!(fmean.abs() <= tol * a.delta, "row mean {fmean}");
        assert!(gmean.abs() <= tol * a.delta, "col mean {gmean}");
        for b in d.axes.iter().skip(ai + 1) {
            let fx: f64 = (0..a.f.len()).map(|i| a.f[i] * b.f[i] * mr[i]).sum();
            let gx: f64 = (0..a.g.len()).map(|j| a.g[j] * b.g[j] * mc[j]).sum();
            assert!(fx.abs() <= tol * a.delta * b.delta, "row cross-moment");
            assert!(gx.abs() <= tol * a.delta * b.delta, "col cross-moment");
        }
    }
    assert_full_reconstruction(t, d, tol);
}

/// Checks the taxicab-side conditions: L1 dispersion identities,
/// weighted means, sign-orthogonality against earlier axes, and the
/// full reconstruction.
pub fn assert_tsvd_conditions(t: &Triplet, d: &Decomposition, tol: f64) {
    let (mr, mc) = (t.row_metric(), t.col_metric());
    for (ai, a) in d.axes.iter().enumerate() {
        let fabs: f64 = (0..a.f.len()).map(|i| a.f[i].abs() * mr[i]).sum();
        let gabs: f64 = (0..a.g.len()).map(|j| a.g[j].abs() * mc[j]).sum();
        assert!((fabs - a.delta).abs() <= tol * a.delta, "row L1 identity");
        assert!((gabs - a.delta).abs() <= tol * a.delta, "col L1 identity");
        let fmean: f64 = (0..a.f.len()).map(|i| a.f[i] * mr[i]).sum();
        let gmean: f64 = (0..a.g.len()).map(|j| a.g[j] * mc[j]).sum();
        assert!(fmean.abs() <= tol * a.delta, "row mean");
        assert!(gmean.abs() <= tol * a.delta, "col mean");
        for b in d.axes.iter().take(ai) {
            let fx: f64 = (0..a.f.len())
                .map(|i| a.f[i] * b.f[i].signum() * mr[i])
                .sum();
            let gx: f64 = (0..a.g.len())
                .map(|j| a.g[j] * b.g[j].signum() * mc[j])
                .sum();
            assert!(fx.abs() <= tol * a.delta, "row sign-orthogonality {fx}");
            assert!(gx.abs() <= tol * a.delta, "col sign-orthogonality {gx}");
        }
    }
    assert_full_reconstruction(t, d, tol);
}

pub fn assert_full_reconstruction(t: &Triplet, d: &Decomposition, tol: f64) {
    let full = reconstruct(d, d.rank());
    let err = (t.tau() - full).abs().max();
    let scale = t.max_abs_tau().max(1e-9);
    assert!(
        err <= tol * scale,
        "reconstruction error {err} vs scale {scale}"
    );
}

#[allow(dead_code)]
pub fn matrix_from_rows(rows: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j])
}
