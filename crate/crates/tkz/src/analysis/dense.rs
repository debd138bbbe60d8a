//! One-sided Jacobi SVD for the dense oracle routes.
//!
//! Block-circulant matrices carry exactly repeated singular values (conjugate
//! Fourier slices share a spectrum), which the library bidiagonal SVD handles
//! poorly. One-sided Jacobi applies plain Givens rotations until the columns
//! are mutually orthogonal, so its factors stay consistent no matter how
//! clustered the spectrum is; it is slower, which the analysis size cap
//! already accounts for.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone)]
pub struct JacobiSvd {
    /// `m x k` orthonormal columns, `k = min(m, n)`.
    pub u: DMatrix<f64>,
    /// Singular values, descending.
    pub sigma: DVector<f64>,
    /// `n x k` orthonormal columns.
    pub v: DMatrix<f64>,
}

/// Thin SVD `A = U diag(sigma) V^T` via one-sided Jacobi rotations.
pub fn jacobi_svd(a: &DMatrix<f64>) -> JacobiSvd {
    let transposed = a.nrows() < a.ncols();
    let mut u = if transposed { a.transpose() } else { a.clone() };
    let (m, n) = u.shape();
    let mut v = DMatrix::<f64>::identity(n, n);

    let tol = 1e-15;
    for _ in 0..60 {
        let mut rotated = false;
        for i in 0..n.saturating_sub(1) {
            for j in i + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for r in 0..m {
                    let ui = u[(r, i)];
                    let uj = u[(r, j)];
                    alpha += ui * ui;
                    beta += uj * uj;
                    gamma += ui * uj;
                }
                if gamma.abs() <= tol * (alpha * beta).sqrt() || alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..m {
                    let ui = u[(r, i)];
                    let uj = u[(r, j)];
                    u[(r, i)] = c * ui - s * uj;
                    u[(r, j)] = s * ui + c * uj;
                }
                for r in 0..n {
                    let vi = v[(r, i)];
                    let vj = v[(r, j)];
                    v[(r, i)] = c * vi - s * vj;
                    v[(r, j)] = s * vi + c * vj;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma = DVector::zeros(n);
    for c in 0..n {
        let norm = u.column(c).norm();
        sigma[c] = norm;
        if norm > 0.0 {
            for r in 0..m {
                u[(r, c)] /= norm;
            }
        }
    }

    // sort descending
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| sigma[y].partial_cmp(&sigma[x]).expect("finite singular values"));
    let u_sorted = DMatrix::from_fn(m, n, |r, c| u[(r, order[c])]);
    let v_sorted = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    let s_sorted = DVector::from_fn(n, |c, _| sigma[order[c]]);

    if transposed {
        JacobiSvd {
            u: v_sorted,
            sigma: s_sorted,
            v: u_sorted,
        }
    } else {
        JacobiSvd {
            u: u_sorted,
            sigma: s_sorted,
            v: v_sorted,
        }
    }
}

/// Largest singular value.
pub fn spectral_norm(a: &DMatrix<f64>) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    jacobi_svd(a).sigma.max()
}

/// Moore-Penrose pseudoinverse with singular values at or below
/// `rank_tol * sigma_max` truncated.
pub fn pinv_dense(a: &DMatrix<f64>, rank_tol: f64) -> DMatrix<f64> {
    let svd = jacobi_svd(a);
    let smax = svd.sigma.max();
    let mut out = DMatrix::zeros(a.ncols(), a.nrows());
    if smax == 0.0 {
        return out;
    }
    for k in 0..svd.sigma.len() {
        let s = svd.sigma[k];
        if s > rank_tol * smax {
            let scale = 1.0 / s;
            // out += scale * v_k u_k^T
            for r in 0..a.ncols() {
                let v_rk = svd.v[(r, k)] * scale;
                for c in 0..a.nrows() {
                    out[(r, c)] += v_rk * svd.u[(c, k)];
                }
            }
        }
    }
    out
}

/// Minimum-norm least-squares solution of `A X = B`.
pub fn lstsq(a: &DMatrix<f64>, b: &DMatrix<f64>, rank_tol: f64) -> DMatrix<f64> {
    pinv_dense(a, rank_tol) * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn rand_mat(rng: &mut impl Rng, m: usize, n: usize) -> DMatrix<f64> {
        DMatrix::from_fn(m, n, |_, _| rng.sample(StandardNormal))
    }

    fn check_factors(a: &DMatrix<f64>) {
        let svd = jacobi_svd(a);
        let k = a.nrows().min(a.ncols());
        let sig = DMatrix::from_fn(k, k, |i, j| if i == j { svd.sigma[i] } else { 0.0 });
        let recon = &svd.u * sig * svd.v.transpose();
        let scale = a.norm().max(1e-300);
        assert!(
            (recon - a).norm() / scale < 1e-13,
            "reconstruction failed for {}x{}",
            a.nrows(),
            a.ncols()
        );
        let utu = svd.u.transpose() * &svd.u;
        assert!((utu - DMatrix::identity(k, k)).norm() < 1e-12 * k as f64 + 1e-12);
    }

    #[test]
    fn factors_reconstruct_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for (m, n) in [(4, 4), (6, 3), (3, 6), (1, 5), (5, 1)] {
            check_factors(&rand_mat(&mut rng, m, n));
        }
    }

    #[test]
    fn handles_repeated_singular_values() {
        // the exact structure that defeats the bidiagonal path: a wide
        // matrix with a doubled singular value
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        let a = crate::tensor::bcirc(&crate::tensor::Tensor3::from_fn(1, 2, 3, |_, _, _| {
            rng.sample(StandardNormal)
        }));
        check_factors(&a);
        let pinv = pinv_dense(&a, 1e-12);
        let mp1 = (&a * &pinv * &a - &a).norm() / a.norm();
        assert!(mp1 < 1e-13, "mp1 {}", mp1);
        let ap = &a * &pinv;
        assert!((&ap - ap.transpose()).norm() < 1e-13);
    }

    #[test]
    fn identity_and_zero_edge_cases() {
        let id = DMatrix::<f64>::identity(4, 4);
        assert!((spectral_norm(&id) - 1.0).abs() < 1e-14);
        assert!((pinv_dense(&id, 1e-12) - &id).norm() < 1e-13);
        let z = DMatrix::<f64>::zeros(3, 2);
        assert_eq!(spectral_norm(&z), 0.0);
        assert!(pinv_dense(&z, 1e-12).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn lstsq_minimum_norm_on_rank_deficient_system() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        let u = rand_mat(&mut rng, 5, 2);
        let v = rand_mat(&mut rng, 2, 4);
        let a = u * v; // rank 2
        let x_true = rand_mat(&mut rng, 4, 1);
        let b = &a * &x_true;
        let x = lstsq(&a, &b, 1e-10);
        assert!((&a * &x - &b).norm() < 1e-10 * b.norm());
        assert!(x.norm() <= x_true.norm() + 1e-10);
    }
}
