//! Row projectors and the Kaczmarz sweep.
//!
//! `P_i(X) = X - A_{i::}^dagger * (A_{i::} * X - B_{i::})` projects onto the
//! affine subspace of solutions of row `i`. A sweep composes the `m` row
//! projections in permutation order. All row work runs slicewise in the
//! Fourier domain: the tensor is transformed once per sweep, each row
//! correction is a rank-one update per frequency, and the squared residual
//! norm is accumulated in-sweep from the applied corrections (the i-th block
//! of the stacked residual equals `X_{i-1} - X_i`). The stacked-residual
//! definition is retained in tests as an oracle.

use crate::error::{Error, Result};
use crate::sampling::Permutation;
use crate::tensor::{fro_norm2, t_pinv, to_fourier, FourierSlices, Tensor3};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Scalars and the projected point produced by one sweep.
#[derive(Debug, Clone)]
pub struct SweepResult {
    /// `P_{pi}(X)`.
    pub projected: Tensor3,
    /// `delta = ||P_{pi}(X) - X||_F^2`.
    pub delta: f64,
    /// `rho = ||r_{pi}(X)||_F^2`, accumulated from the per-row corrections.
    pub rnorm2: f64,
    /// `gamma = (rho + delta) / 2`.
    pub gamma: f64,
}

impl SweepResult {
    /// Direction `D = P(X) - X` used by the accelerated steps.
    pub fn direction(&self, x: &Tensor3) -> Tensor3 {
        &self.projected - x
    }
}

/// Precomputed row operators: the pseudoinverse of every horizontal slice,
/// in both spatial and Fourier form.
pub struct ProjectorBank {
    m: usize,
    l: usize,
    p: usize,
    n: usize,
    a: Tensor3,
    b: Tensor3,
    pinv_rows: Vec<Tensor3>,
    /// Unique-frequency slices of `A` (rows m) and `B`.
    a_hat: Vec<DMatrix<Complex64>>,
    b_hat: Vec<DMatrix<Complex64>>,
    /// Per unique frequency: column `i` is the Fourier slice of row i's
    /// pseudoinverse.
    pinv_hat: Vec<DMatrix<Complex64>>,
    /// Cached `||pinv column||^2` per (frequency, row).
    pinv_col_norm2: Vec<Vec<f64>>,
    /// Parseval weight per unique frequency (1 for self-conjugate bins, 2
    /// otherwise).
    weights: Vec<f64>,
}

impl ProjectorBank {
    pub fn build(a: &Tensor3, b: &Tensor3, rank_tol: f64) -> Result<Self> {
        if a.rows() != b.rows() || a.depth() != b.depth() {
            return Err(Error::dims(
                "ProjectorBank::build",
                format!("A {}x{}x{}", a.rows(), a.cols(), a.depth()),
                format!("B {}x{}x{}", b.rows(), b.cols(), b.depth()),
            ));
        }
        let (m, l, n) = a.shape();
        let p = b.cols();
        let h = n / 2 + 1;

        let fa = to_fourier(a);
        let fb = to_fourier(b);
        let a_hat: Vec<_> = (0..h).map(|w| fa.slice(w).clone()).collect();
        let b_hat: Vec<_> = (0..h).map(|w| fb.slice(w).clone()).collect();

        let mut pinv_rows = Vec::with_capacity(m);
        let mut pinv_hat = vec![DMatrix::<Complex64>::zeros(l, m); h];
        let mut pinv_col_norm2 = vec![vec![0.0; m]; h];
        for i in 0..m {
            let pinv = t_pinv(&a.row_slice(i), rank_tol);
            let fp = to_fourier(&pinv);
            for w in 0..h {
                let col = fp.slice(w);
                let mut norm2 = 0.0;
                for k in 0..l {
                    let z = col[(k, 0)];
                    pinv_hat[w][(k, i)] = z;
                    norm2 += z.norm_sqr();
                }
                pinv_col_norm2[w][i] = norm2;
            }
            pinv_rows.push(pinv);
        }

        let weights = (0..h)
            .map(|w| {
                if w == 0 || (n % 2 == 0 && w == n / 2) {
                    1.0
                } else {
                    2.0
                }
            })
            .collect();

        Ok(ProjectorBank {
            m,
            l,
            p,
            n,
            a: a.clone(),
            b: b.clone(),
            pinv_rows,
            a_hat,
            b_hat,
            pinv_hat,
            pinv_col_norm2,
            weights,
        })
    }

    pub fn row_count(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> &Tensor3 {
        &self.a
    }

    pub fn b(&self) -> &Tensor3 {
        &self.b
    }

    /// `A_{i::}^dagger` as an `l x 1 x n` tensor.
    pub fn pinv_row(&self, i: usize) -> &Tensor3 {
        &self.pinv_rows[i]
    }

    fn solution_shape_ok(&self, x: &Tensor3) -> Result<()> {
        if x.shape() != (self.l, self.p, self.n) {
            return Err(Error::dims(
                "projection",
                format!("{}x{}x{}", self.l, self.p, self.n),
                format!("{}x{}x{}", x.rows(), x.cols(), x.depth()),
            ));
        }
        Ok(())
    }

    fn unique_slices(&self, x: &Tensor3) -> Vec<DMatrix<Complex64>> {
        let fx = to_fourier(x);
        (0..self.n / 2 + 1).map(|w| fx.slice(w).clone()).collect()
    }

    fn assemble(&self, unique: Vec<DMatrix<Complex64>>) -> Tensor3 {
        crate::tensor::from_fourier(&FourierSlices::from_unique(self.l, self.p, self.n, unique))
    }

    /// Applies row `i`'s correction to the frequency slices in place and
    /// returns the squared Frobenius norm (spatial scale) of the correction.
    fn apply_row(&self, i: usize, xhat: &mut [DMatrix<Complex64>]) -> f64 {
        let mut corr_norm2 = 0.0;
        for (w, xw) in xhat.iter_mut().enumerate() {
            let a_row = &self.a_hat[w];
            let b_row = &self.b_hat[w];
            let mut res_norm2 = 0.0;
            let mut res = vec![Complex64::new(0.0, 0.0); self.p];
            for (j, r) in res.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..self.l {
                    acc += a_row[(i, k)] * xw[(k, j)];
                }
                acc -= b_row[(i, j)];
                *r = acc;
                res_norm2 += acc.norm_sqr();
            }
            // rank-one update X_w -= pinv_col * res
            let pinv = &self.pinv_hat[w];
            for (j, r) in res.iter().enumerate() {
                for k in 0..self.l {
                    xw[(k, j)] -= pinv[(k, i)] * r;
                }
            }
            corr_norm2 += self.weights[w] * self.pinv_col_norm2[w][i] * res_norm2;
        }
        corr_norm2 / self.n as f64
    }

    /// Single projection `P_i(X)`.
    pub fn project_row(&self, x: &Tensor3, i: usize) -> Result<Tensor3> {
        self.solution_shape_ok(x)?;
        if i >= self.m {
            return Err(Error::InvalidArgument {
                op: "project_row",
                msg: format!("row {} out of range 0..{}", i, self.m),
            });
        }
        let mut xhat = self.unique_slices(x);
        self.apply_row(i, &mut xhat);
        Ok(self.assemble(xhat))
    }

    /// One full epoch: the composition of all `m` row projections in the
    /// order given by `pi`.
    pub fn sweep(&self, x: &Tensor3, pi: &Permutation) -> Result<SweepResult> {
        self.solution_shape_ok(x)?;
        if pi.len() != self.m || !pi.is_bijection() {
            return Err(Error::InvalidArgument {
                op: "sweep",
                msg: format!("permutation must be a bijection on 0..{}", self.m),
            });
        }
        let mut xhat = self.unique_slices(x);
        let mut rnorm2 = 0.0;
        for &i in pi.order() {
            rnorm2 += self.apply_row(i, &mut xhat);
        }
        let projected = self.assemble(xhat);
        let delta = fro_norm2(&(&projected - x));
        let gamma = 0.5 * (rnorm2 + delta);
        Ok(SweepResult {
            projected,
            delta,
            rnorm2,
            gamma,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Permutation;
    use crate::tensor::{bcirc, fold, fro_norm, inner, t_product, t_transpose, unfold};
    use crate::testutil::{rand_tensor, rel_err_mat, rel_err_tensor};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_consistent(
        rng: &mut ChaCha8Rng,
        m: usize,
        l: usize,
        p: usize,
        n: usize,
    ) -> (Tensor3, Tensor3, Tensor3) {
        let a = rand_tensor(rng, m, l, n);
        let x = rand_tensor(rng, l, p, n);
        let b = t_product(&a, &x).unwrap();
        (a, b, x)
    }

    #[test]
    fn identity_row_has_identity_pinv() {
        // single row whose first slice is e_1^T: its pinv is the same tube
        // transposed.
        let mut a = Tensor3::zeros(1, 3, 2);
        a.set(0, 0, 0, 1.0);
        let b = Tensor3::zeros(1, 1, 2);
        let bank = ProjectorBank::build(&a, &b, 1e-12).unwrap();
        let pinv = bank.pinv_row(0);
        assert_eq!(pinv.shape(), (3, 1, 2));
        assert!((pinv.get(0, 0, 0) - 1.0).abs() < 1e-12);
        assert!(fro_norm2(pinv) - 1.0 < 1e-12);
    }

    #[test]
    fn zero_row_projects_to_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let mut a = rand_tensor(&mut rng, 3, 4, 2);
        for j in 0..4 {
            for s in 0..2 {
                a.set(1, j, s, 0.0);
            }
        }
        let x_true = rand_tensor(&mut rng, 4, 2, 2);
        let b = t_product(&a, &x_true).unwrap();
        let bank = ProjectorBank::build(&a, &b, 1e-12).unwrap();
        assert!(bank.pinv_row(1).is_zero());
        let x = rand_tensor(&mut rng, 4, 2, 2);
        let y = bank.project_row(&x, 1).unwrap();
        assert!(rel_err_tensor(&y, &x) < 1e-12);
    }

    #[test]
    fn pinv_rows_satisfy_moore_penrose() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        let (a, b, _) = random_consistent(&mut rng, 3, 4, 2, 3);
        let bank = ProjectorBank::build(&a, &b, 1e-12).unwrap();
        for i in 0..3 {
            let row = bcirc(&a.row_slice(i));
            let pinv = bcirc(bank.pinv_row(i));
            let scale = row.norm();
            assert!((&row * &pinv * &row - &row).norm() <= 1e-8 * scale, "row {} mp1", i);
            assert!((&pinv * &row * &pinv - &pinv).norm() <= 1e-8 * pinv.norm(), "row {} mp2", i);
            let rp = &row * &pinv;
            assert!((&rp - rp.transpose()).norm() <= 1e-8 * rp.norm().max(1e-300), "row {} mp3", i);
            let pr = &pinv * &row;
            assert!((&pr - pr.transpose()).norm() <= 1e-8 * pr.norm().max(1e-300), "row {} mp4", i);
        }
    }

    #[test]
    fn projection_satisfies_row_equation_and_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        let (a, b, _) = random_consistent(&mut rng, 4, 5, 2, 3);
        let bank = ProjectorBank::build(&a, &b, 1e-12).unwrap();
        let x = rand_tensor(&mut rng, 5, 2, 3);
        for i in 0..4 {
            let y = bank.project_row(&x, i).unwrap();
            let lhs = t_product(&a.row_slice(i), &y).unwrap();
            let rhs = b.row_slice(i);
            assert!(fro_norm(&(&lhs - &rhs)) < 1e-8 * fro_norm(&rhs).max(1.0));
            let y2 = bank.project_row(&y, i).unwrap();
            assert!(rel_err_tensor(&y2, &y) < 1e-10);
        }
    }

    #[test]
    fn projection_fixes_feasible_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        let (a, b, x_true) = random_consistent(&mut rng, 4, 5, 2, 3);
        let bank = ProjectorBank::build(&a, &b, 1e-12).unwrap();
        let y = bank.project_row(&x_true, 2).unwrap();
        assert!(rel_err_tensor(&y, &x_true) < 1e-12);
    }

    #[test]
    fn sweep_at_solution_has_zero_scalars() {
        let mut rng = ChaCha8Rng::seed_from_u64(65);
        let (a, b, x_true) = random_consistent(&mut rng, 5, 4, 2, 2);
        let bank = ProjectorBank::build(&a, &b, 1e-12).unwrap();
        let sw = bank.sweep(&x_true, &Permutation::identity(5)).unwrap();
        let scale = fro_norm2(&x_true);
        assert!(sw.delta <= 1e-24 * scale);
        assert!(sw.rnorm2 <= 1e-24 * scale);
        assert!(sw.gamma <= 1e-24 * scale);
    }

    #[test]
    fn single_row_sweep_from_zero_projects_onto_row_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(66);
        let (a, b, _) = random_consistent(&mut rng, 1, 4, 2, 3);
        let bank = ProjectorBank::build(&a, &b, 1e-12).unwrap();
        let x0 = Tensor3::zeros(4, 2, 3);
        let sw = bank.sweep(&x0, &Permutation::identity(1)).unwrap();
        let expect = t_product(bank.pinv_row(0), &b.row_slice(0)).unwrap();
        assert!(rel_err_tensor(&sw.projected, &expect) < 1e-10);
    }

    /// Literal stacked-residual construction: block i is
    /// `unfold(A_i^dagger * (A_i * X_{i-1} - B_i))` with X advanced by spatial
    /// projections.
    fn stacked_residual_norm2(
        bank: &ProjectorBank,
        a: &Tensor3,
        b: &Tensor3,
        x: &Tensor3,
        pi: &Permutation,
    ) -> f64 {
        let mut cur = x.clone();
        let mut total = 0.0;
        for &i in pi.order() {
            let res = &t_product(&a.row_slice(i), &cur).unwrap() - &b.row_slice(i);
            let corr = t_product(bank.pinv_row(i), &res).unwrap();
            let block = unfold(&corr);
            total += block.iter().map(|v| v * v).sum::<f64>();
            cur = &cur - &corr;
        }
        total
    }

    #[test]
    fn in_sweep_residual_matches_literal_stack() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let (a, b, _) = random_consistent(&mut rng, 5, 4, 2, 2);
        let bank = ProjectorBank::build(&a, &b, 1e-12).unwrap();
        let x = rand_tensor(&mut rng, 4, 2, 2);
        let pi = Permutation::identity(5);
        let sw = bank.sweep(&x, &pi).unwrap();
        let oracle = stacked_residual_norm2(&bank, &a, &b, &x, &pi);
        assert!(
            (sw.rnorm2 - oracle).abs() < 1e-10 * oracle.max(1.0),
            "in-sweep {} vs oracle {}",
            sw.rnorm2,
            oracle
        );
        // the sweep result itself must match the sequential spatial
        // projections
        let mut cur = x.clone();
        for &i in pi.order() {
            cur = bank.project_row(&cur, i).unwrap();
        }
        assert!(rel_err_tensor(&sw.projected, &cur) < 1e-11);
        assert!((sw.gamma - 0.5 * (sw.rnorm2 + sw.delta)).abs() <= f64::EPSILON * sw.gamma.max(1.0));
    }

    #[test]
    fn sweep_rejects_non_bijections() {
        let mut rng = ChaCha8Rng::seed_from_u64(68);
        let (a, b, _) = random_consistent(&mut rng, 3, 3, 1, 2);
        let bank = ProjectorBank::build(&a, &b, 1e-12).unwrap();
        let x = Tensor3::zeros(3, 1, 2);
        let bad = Permutation::identity(2);
        assert!(bank.sweep(&x, &bad).is_err());
    }

    #[test]
    fn dense_composite_projection_agrees() {
        // P_pi(X) computed through dense bcirc algebra:
        // sequential x <- x - pinv_i (row_i x - b_i) on unfolded matrices.
        let mut rng = ChaCha8Rng::seed_from_u64(69);
        let (a, b, _) = random_consistent(&mut rng, 4, 3, 2, 2);
        let bank = ProjectorBank::build(&a, &b, 1e-12).unwrap();
        let x = rand_tensor(&mut rng, 3, 2, 2);
        let pi = Permutation::identity(4);
        let sw = bank.sweep(&x, &pi).unwrap();

        let mut cur = unfold(&x);
        for &i in pi.order() {
            let row = bcirc(&a.row_slice(i));
            let pinv = crate::analysis::pinv_dense(&row, 1e-13);
            let res = &row * &cur - unfold(&b.row_slice(i));
            cur -= pinv * res;
        }
        let dense = fold(&cur, 2).unwrap();
        assert!(rel_err_tensor(&sw.projected, &dense) < 1e-9);
    }

    #[test]
    fn adjoint_consistency_of_row_operators() {
        // <A_i * X, Y> = <X, A_i^T * Y> for the stored row slices
        let mut rng = ChaCha8Rng::seed_from_u64(70);
        let (a, _b, _) = random_consistent(&mut rng, 3, 4, 2, 3);
        let x = rand_tensor(&mut rng, 4, 2, 3);
        let y = rand_tensor(&mut rng, 1, 2, 3);
        for i in 0..3 {
            let row = a.row_slice(i);
            let lhs = inner(&t_product(&row, &x).unwrap(), &y).unwrap();
            let rhs = inner(&x, &t_product(&t_transpose(&row), &y).unwrap()).unwrap();
            assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn rejects_shape_mismatch() {
        let a = Tensor3::zeros(3, 4, 2);
        let b = Tensor3::zeros(2, 2, 2);
        assert!(ProjectorBank::build(&a, &b, 1e-12).is_err());
        let b = Tensor3::zeros(3, 2, 2);
        let bank = ProjectorBank::build(&a, &b, 1e-12).unwrap();
        let x_bad = Tensor3::zeros(4, 2, 3);
        assert!(bank.sweep(&x_bad, &Permutation::identity(3)).is_err());
    }
}
