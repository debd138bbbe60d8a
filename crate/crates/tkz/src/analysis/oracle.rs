//! Brute-force cross-check for the accelerated step: the closest point to
//! the ground truth inside the affine hull of the iterate window and the
//! sweep output, computed by a dense least-squares solve. This is the
//! reference the production steps are compared against; it never feeds the
//! solvers themselves.

use crate::error::{Error, Result};
use crate::tensor::{inner, Tensor3};
use nalgebra::{DMatrix, DVector};

/// Minimizes `||X - X*||_F` over `aff{window[0], ..., window[last],
/// projected}`. The window must contain the current iterate as its last
/// entry.
pub fn affine_argmin_oracle(window: &[Tensor3], projected: &Tensor3, x_star: &Tensor3) -> Result<Tensor3> {
    let x = window.last().ok_or(Error::InvalidArgument {
        op: "affine_argmin_oracle",
        msg: "window must hold at least the current iterate".into(),
    })?;
    // direction columns around x: older iterates and the sweep output
    let mut cols: Vec<Tensor3> = window[..window.len() - 1].iter().map(|w| w - x).collect();
    cols.push(projected - x);
    let q = cols.len();

    // normal equations with the ground-truth right-hand side
    let mut gram = DMatrix::zeros(q, q);
    let mut rhs = DVector::zeros(q);
    let err = x_star - x;
    for i in 0..q {
        for j in i..q {
            let v = inner(&cols[i], &cols[j])?;
            gram[(i, j)] = v;
            gram[(j, i)] = v;
        }
        rhs[i] = inner(&cols[i], &err)?;
    }
    let s = gram.cholesky().map(|c| c.solve(&rhs)).ok_or(Error::NumericalBreakdown {
        op: "affine_argmin_oracle",
        msg: "affinely dependent window".into(),
    })?;

    let mut out = x.clone();
    for (c, coeff) in cols.iter().zip(s.iter()) {
        out.axpy(*coeff, c);
    }
    Ok(out)
}

/// Second route through a dense SVD least-squares solve; kept separate so
/// the two can validate each other.
pub fn affine_argmin_svd(window: &[Tensor3], projected: &Tensor3, x_star: &Tensor3) -> Result<Tensor3> {
    let x = window.last().ok_or(Error::InvalidArgument {
        op: "affine_argmin_svd",
        msg: "window must hold at least the current iterate".into(),
    })?;
    let mut cols: Vec<Tensor3> = window[..window.len() - 1].iter().map(|w| w - x).collect();
    cols.push(projected - x);
    let rows = x.tv().len();
    let mut m = DMatrix::zeros(rows, cols.len());
    for (c, col) in cols.iter().enumerate() {
        for (r, v) in col.tv().iter().enumerate() {
            m[(r, c)] = *v;
        }
    }
    let err = x_star - x;
    let rhs = DVector::from_column_slice(err.tv());
    let s = super::dense::pinv_dense(&m, 1e-13) * rhs;
    let mut out = x.clone();
    for (c, coeff) in cols.iter().zip(s.iter()) {
        out.axpy(*coeff, c);
    }
    Ok(out)
}
