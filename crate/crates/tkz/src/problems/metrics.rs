//! Error metrics: relative squared error and peak signal-to-noise ratio.

use crate::tensor::{fro_norm2, Tensor3};
use nalgebra::DMatrix;

/// Stand-in for an infinite PSNR when the MSE vanishes.
pub const PSNR_CAP: f64 = 999.0;

/// Relative squared error
/// `||x - x_star0||_F^2 / ||x0 - x_star0||_F^2`; `None` when the denominator
/// vanishes (the run started at the solution).
pub fn rse(x: &Tensor3, x_star0: &Tensor3, x0: &Tensor3) -> Option<f64> {
    let denom = fro_norm2(&(x0 - x_star0));
    if denom == 0.0 {
        return None;
    }
    Some(fro_norm2(&(x - x_star0)) / denom)
}

/// `10 log10(peak^2 / MSE)` of two frames, capped at [`PSNR_CAP`] when the
/// MSE is zero.
pub fn psnr(estimate: &DMatrix<f64>, reference: &DMatrix<f64>, peak: f64) -> f64 {
    assert_eq!(estimate.shape(), reference.shape(), "psnr frame shapes differ");
    let count = (estimate.nrows() * estimate.ncols()) as f64;
    let mse = (estimate - reference).map(|d| d * d).sum() / count;
    if mse == 0.0 {
        return PSNR_CAP;
    }
    (10.0 * (peak * peak / mse).log10()).min(PSNR_CAP)
}
