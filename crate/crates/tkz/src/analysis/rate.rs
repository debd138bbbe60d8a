//! Sweep operators and contraction-rate quantities.
//!
//! One epoch is the affine map `P_pi(X) = T_pi * X + G_pi`. The plain
//! Kaczmarz contraction factor is `rho_pi = ||bcirc(T_pi * A^dagger * A)||_2^2`
//! and the accelerated step satisfies
//! `||X^{k+1} - X*||^2 = (1 - beta_k zeta_k^2) ||X^k - X*||^2` with
//! `1 - beta_k zeta_k^2 <= rho_pi`.

use super::check_cap;
use super::dense::{lstsq, pinv_dense, spectral_norm};
use crate::error::{Error, Result};
use crate::sampling::Permutation;
use crate::solvers::RunHistory;
use crate::tensor::{bcirc, fro_norm, fro_norm2, inner, t_identity, t_pinv, t_product, t_transpose, Tensor3};
use nalgebra::{DMatrix, DVector};

/// `I - A_{i::}^dagger * A_{i::}` for one row.
fn row_factor(a: &Tensor3, i: usize, rank_tol: f64) -> Result<Tensor3> {
    let row = a.row_slice(i);
    let pinv = t_pinv(&row, rank_tol);
    let proj = t_product(&pinv, &row)?;
    Ok(&t_identity(a.cols(), a.depth()) - &proj)
}

/// Linear part `T_pi` of the sweep: the ordered product of the row factors,
/// first projection applied first (rightmost).
pub fn compute_t_pi(a: &Tensor3, pi: &Permutation, rank_tol: f64) -> Result<Tensor3> {
    check_cap(a)?;
    let mut t = t_identity(a.cols(), a.depth());
    for &i in pi.order() {
        t = t_product(&row_factor(a, i, rank_tol)?, &t)?;
    }
    Ok(t)
}

/// Affine part `G_pi` of the sweep, accumulated from the literal sum with
/// suffix products of the row factors.
pub fn compute_g_pi(a: &Tensor3, b: &Tensor3, pi: &Permutation, rank_tol: f64) -> Result<Tensor3> {
    check_cap(a)?;
    let m = pi.len();
    let order = pi.order();
    // suffix[i] = factor_{pi_m} * ... * factor_{pi_{i+1}} (identity for i = m-1)
    let mut suffix = vec![t_identity(a.cols(), a.depth()); m];
    for i in (0..m.saturating_sub(1)).rev() {
        suffix[i] = t_product(&suffix[i + 1], &row_factor(a, order[i + 1], rank_tol)?)?;
    }
    let mut g = Tensor3::zeros(a.cols(), b.cols(), a.depth());
    for i in 0..m {
        let pinv = t_pinv(&a.row_slice(order[i]), rank_tol);
        let term = t_product(&pinv, &b.row_slice(order[i]))?;
        let term = t_product(&suffix[i], &term)?;
        g.axpy(1.0, &term);
    }
    Ok(g)
}

/// Plain-Kaczmarz per-epoch contraction factor
/// `rho_pi = ||bcirc(T_pi * A^dagger * A)||_2^2`, via dense SVD.
pub fn rho_pi(a: &Tensor3, pi: &Permutation, rank_tol: f64) -> Result<f64> {
    check_cap(a)?;
    let t = compute_t_pi(a, pi, rank_tol)?;
    let proj = t_product(&t_pinv(a, rank_tol), a)?; // A^dagger * A
    let composed = t_product(&t, &proj)?;
    let sigma = spectral_norm(&bcirc(&composed));
    Ok(sigma * sigma)
}

/// The two rate quantities of one epoch.
#[derive(Debug, Clone, Copy)]
pub struct BetaZeta {
    /// `beta_k = (1 - ||V V^dagger d||^2 / ||d||^2)^{-1}`, at least 1.
    pub rate_beta: f64,
    /// Normalized inner product between the error and the sweep direction.
    pub zeta: f64,
    /// `1 - beta_k zeta_k^2`, the epoch's contraction bound.
    pub bound: f64,
}

/// Computes `beta_k` and `zeta_k` from the iterate window
/// `X^{j_k,tau}..X^{k-1}`, the current iterate, the sweep output, and the
/// ground truth. The window projection runs through a dense least-squares
/// solve.
pub fn rate_beta_zeta(
    window: &[Tensor3],
    x: &Tensor3,
    projected: &Tensor3,
    x_star: &Tensor3,
) -> Result<BetaZeta> {
    let d = projected - x;
    let d_norm2 = fro_norm2(&d);
    let err_norm2 = fro_norm2(&(x - x_star));
    if d_norm2 == 0.0 || err_norm2 == 0.0 {
        return Err(Error::InvalidArgument {
            op: "rate_beta_zeta",
            msg: "iterate already solves the system".into(),
        });
    }

    let rate_beta = if window.is_empty() {
        1.0
    } else {
        let rows = d.tv().len();
        let mut v = DMatrix::zeros(rows, window.len());
        for (c, w) in window.iter().enumerate() {
            let diff = w - x;
            for (r, val) in diff.tv().iter().enumerate() {
                v[(r, c)] = *val;
            }
        }
        let dvec = DVector::from_column_slice(d.tv());
        let s = pinv_dense(&v, 1e-13) * &dvec;
        let projected_part = v * s;
        let ratio = projected_part.norm_squared() / d_norm2;
        1.0 / (1.0 - ratio)
    };

    let zeta = inner(&(x - x_star), &(x - projected))? / (err_norm2.sqrt() * d_norm2.sqrt());
    Ok(BetaZeta {
        rate_beta,
        zeta,
        bound: 1.0 - rate_beta * zeta * zeta,
    })
}

/// Everything Theorem-level about one epoch of an accelerated run.
#[derive(Debug, Clone, Copy)]
pub struct RateReport {
    pub rho_pi: f64,
    pub rate_beta: f64,
    pub zeta: f64,
    /// `1 - beta_k zeta_k^2`.
    pub bound: f64,
    /// `||X^{k+1} - X*||^2 / ||X^k - X*||^2` as realized by the run.
    pub observed_factor: f64,
}

/// Assembles the rate report for epoch `k` of a captured run.
pub fn rate_report_for_epoch(
    history: &RunHistory,
    tau: Option<usize>,
    k: usize,
    rho: f64,
    x_star: &Tensor3,
) -> Result<RateReport> {
    let x = &history.iterates[k];
    let x_next = &history.iterates[k + 1];
    let projected = &history.sweeps[k].projected;
    let j = match tau {
        Some(t) => k.saturating_sub(t - 1),
        None => 0,
    };
    let bz = rate_beta_zeta(&history.iterates[j..k], x, projected, x_star)?;
    let observed = fro_norm2(&(x_next - x_star)) / fro_norm2(&(x - x_star));
    Ok(RateReport {
        rho_pi: rho,
        rate_beta: bz.rate_beta,
        zeta: bz.zeta,
        bound: bz.bound,
        observed_factor: observed,
    })
}

/// Dense-route tensor pseudoinverse: pinv of `bcirc(A)` folded back from its
/// first block column. Used purely as a cross-check against the Fourier
/// path.
pub fn t_pinv_dense(a: &Tensor3, rank_tol: f64) -> Result<Tensor3> {
    check_cap(a)?;
    let (m, l, n) = a.shape();
    let pinv = pinv_dense(&bcirc(a), rank_tol);
    debug_assert_eq!(pinv.shape(), (l * n, m * n));
    Ok(Tensor3::from_fn(l, m, n, |i, j, s| pinv[(s * l + i, j)]))
}

/// Checks that every lateral slice of `A^dagger` lies in `range_K(A^T)` by
/// solving `A^T * Y = A^dagger` in the least-squares sense; returns the
/// relative residual.
pub fn pinv_range_residual(a: &Tensor3, rank_tol: f64) -> Result<f64> {
    check_cap(a)?;
    let pinv = t_pinv(a, rank_tol);
    let at = bcirc(&t_transpose(a));
    let rhs = crate::tensor::unfold(&pinv);
    let sol = lstsq(&at, &rhs, 1e-13);
    let scale = fro_norm(&pinv);
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(((at * sol) - rhs).norm() / scale)
}
