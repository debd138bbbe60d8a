//! One-sided Jacobi SVD for complex matrices.
//!
//! The per-slice pseudoinverse must stay accurate for rank-deficient and
//! repeated-spectrum slices, where bidiagonalization-based SVDs can return
//! inconsistent factors. One-sided Jacobi orthogonalizes column pairs with
//! unitary rotations (a phase to make the pair's inner product real, then a
//! real Givens rotation), so `A = U diag(sigma) V^H` holds by construction
//! at every step.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub struct JacobiSvdComplex {
    /// `m x k` with orthonormal columns, `k = min(m, n)`.
    pub u: DMatrix<Complex64>,
    pub sigma: DVector<f64>,
    /// `n x k` with orthonormal columns.
    pub v: DMatrix<Complex64>,
}

pub fn jacobi_svd_complex(a: &DMatrix<Complex64>) -> JacobiSvdComplex {
    let transposed = a.nrows() < a.ncols();
    let mut w = if transposed { a.adjoint() } else { a.clone() };
    let (m, n) = w.shape();
    let mut v = DMatrix::<Complex64>::identity(n, n);

    let tol = 1e-15;
    for _ in 0..60 {
        let mut rotated = false;
        for i in 0..n.saturating_sub(1) {
            for j in i + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = Complex64::new(0.0, 0.0);
                for r in 0..m {
                    let wi = w[(r, i)];
                    let wj = w[(r, j)];
                    alpha += wi.norm_sqr();
                    beta += wj.norm_sqr();
                    gamma += wi.conj() * wj;
                }
                let gnorm = gamma.norm();
                if gnorm <= tol * (alpha * beta).sqrt() || alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                rotated = true;
                // absorb the phase into column j, making the pair real
                let phase = gamma / gnorm;
                let zeta = (beta - alpha) / (2.0 * gnorm);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..m {
                    let wi = w[(r, i)];
                    let wj = w[(r, j)] * phase.conj();
                    w[(r, i)] = wi * c - wj * s;
                    w[(r, j)] = wi * s + wj * c;
                }
                for r in 0..n {
                    let vi = v[(r, i)];
                    let vj = v[(r, j)] * phase.conj();
                    v[(r, i)] = vi * c - vj * s;
                    v[(r, j)] = vi * s + vj * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma = DVector::zeros(n);
    for c in 0..n {
        let norm = w.column(c).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        sigma[c] = norm;
        if norm > 0.0 {
            let inv = 1.0 / norm;
            for r in 0..m {
                w[(r, c)] *= inv;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| sigma[y].partial_cmp(&sigma[x]).expect("finite singular values"));
    let u_sorted = DMatrix::from_fn(m, n, |r, c| w[(r, order[c])]);
    let v_sorted = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    let s_sorted = DVector::from_fn(n, |c, _| sigma[order[c]]);

    if transposed {
        // A^H = U Sigma V^H  =>  A = V Sigma U^H
        JacobiSvdComplex {
            u: v_sorted,
            sigma: s_sorted,
            v: u_sorted,
        }
    } else {
        JacobiSvdComplex {
            u: u_sorted,
            sigma: s_sorted,
            v: v_sorted,
        }
    }
}
