//! Direct Gearhart-Koshy step: solve the normal equations of the affine
//! search over `aff{X^{j_k,tau}, ..., X^k, P(X^k)}`.
//!
//! The Gram matrix is assembled from tensor inner products and the
//! right-hand side collapses to `gamma_k e_last` because all earlier window
//! iterates are orthogonal to `X^k - X_*^0`. The window matrix has full
//! column rank whenever the iterate is not a solution, so the system is
//! solved by a Cholesky factorization, with a single jitter retry before
//! declaring the window numerically rank-deficient.

use super::projector::SweepResult;
use crate::error::{Error, Result};
use crate::tensor::{inner, Tensor3};
use nalgebra::{DMatrix, DVector};
use std::collections::VecDeque;

/// Iterate window for the direct normal-equation step.
#[derive(Debug, Clone)]
pub struct DirectState {
    /// Most recent iterates, oldest first; the newest entry is `X^k`.
    window: VecDeque<Tensor3>,
    capacity: Option<usize>,
}

impl DirectState {
    /// `tau = None` keeps the full history (the Krylov regime).
    pub fn new(x0: Tensor3, tau: Option<usize>) -> Self {
        let mut window = VecDeque::new();
        window.push_back(x0);
        DirectState {
            window,
            capacity: tau,
        }
    }

    pub fn current(&self) -> &Tensor3 {
        self.window.back().expect("window never empty")
    }

    pub fn window_len(&self) -> usize {
        self.window.len()
    }

    /// One accelerated update from the sweep of the current iterate.
    /// Requires `delta_k > 0`; the caller stops beforehand otherwise.
    pub fn step(&mut self, sweep: &SweepResult) -> Result<&Tensor3> {
        let x = self.current().clone();
        let d = sweep.direction(&x);
        let q = self.window.len(); // columns: q-1 iterate diffs + d
        let mut cols: Vec<Tensor3> = Vec::with_capacity(q);
        for old in self.window.iter().take(q - 1) {
            cols.push(old - &x);
        }
        cols.push(d);

        let mut gram = DMatrix::zeros(q, q);
        for i in 0..q {
            for j in i..q {
                let v = inner(&cols[i], &cols[j]).expect("window shapes match");
                gram[(i, j)] = v;
                gram[(j, i)] = v;
            }
        }
        let mut rhs = DVector::zeros(q);
        rhs[q - 1] = sweep.gamma;

        let s = solve_spd(&gram, &rhs)?;

        let mut next = x;
        for (c, coeff) in cols.iter().zip(s.iter()) {
            next.axpy(*coeff, c);
        }
        self.window.push_back(next);
        if let Some(cap) = self.capacity {
            while self.window.len() > cap {
                self.window.pop_front();
            }
        }
        Ok(self.current())
    }
}

/// Cholesky solve with one jitter retry (`+1e-12 * trace` on the diagonal).
fn solve_spd(gram: &DMatrix<f64>, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    if let Some(chol) = gram.clone().cholesky() {
        return Ok(chol.solve(rhs));
    }
    let jitter = 1e-12 * gram.trace();
    let mut bumped = gram.clone();
    for i in 0..bumped.nrows() {
        bumped[(i, i)] += jitter;
    }
    match bumped.cholesky() {
        Some(chol) => Ok(chol.solve(rhs)),
        None => Err(Error::NumericalBreakdown {
            op: "tkgk_step_direct",
            msg: "window Gram matrix is numerically rank-deficient after jitter retry".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::projector::ProjectorBank;
    use crate::sampling::Permutation;
    use crate::tensor::{fro_norm, fro_norm2, t_product};
    use crate::testutil::rand_tensor;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn first_step_is_the_original_gearhart_koshy_step() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let a = rand_tensor(&mut rng, 4, 3, 2);
        let x_true = rand_tensor(&mut rng, 3, 2, 2);
        let b = t_product(&a, &x_true).unwrap();
        let bank = ProjectorBank::build(&a, &b, 1e-12).unwrap();
        let x0 = Tensor3::zeros(3, 2, 2);
        let sweep = bank.sweep(&x0, &Permutation::identity(4)).unwrap();

        let mut st = DirectState::new(x0.clone(), Some(5));
        let next = st.step(&sweep).unwrap().clone();

        let d = sweep.direction(&x0);
        let coeff = sweep.gamma / fro_norm2(&d);
        let mut expect = x0;
        expect.axpy(coeff, &d);
        assert!(fro_norm(&(&next - &expect)) < 1e-12 * fro_norm(&expect));
    }

    #[test]
    fn tau_one_always_takes_the_line_search_step() {
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        let a = rand_tensor(&mut rng, 5, 4, 2);
        let x_true = rand_tensor(&mut rng, 4, 2, 2);
        let b = t_product(&a, &x_true).unwrap();
        let bank = ProjectorBank::build(&a, &b, 1e-12).unwrap();

        let mut st = DirectState::new(Tensor3::zeros(4, 2, 2), Some(1));
        for _ in 0..4 {
            let x = st.current().clone();
            let sweep = bank.sweep(&x, &Permutation::identity(5)).unwrap();
            let d = sweep.direction(&x);
            let mut expect = x;
            expect.axpy(sweep.gamma / fro_norm2(&d), &d);
            let next = st.step(&sweep).unwrap();
            assert!(fro_norm(&(next - &expect)) < 1e-10 * fro_norm(&expect).max(1.0));
            assert_eq!(st.window_len(), 1);
        }
    }

    #[test]
    fn window_never_exceeds_tau() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let a = rand_tensor(&mut rng, 6, 5, 2);
        let x_true = rand_tensor(&mut rng, 5, 2, 2);
        let b = t_product(&a, &x_true).unwrap();
        let bank = ProjectorBank::build(&a, &b, 1e-12).unwrap();
        let mut st = DirectState::new(Tensor3::zeros(5, 2, 2), Some(3));
        for k in 0..6 {
            let sweep = bank.sweep(&st.current().clone(), &Permutation::identity(6)).unwrap();
            st.step(&sweep).unwrap();
            assert_eq!(st.window_len(), (k + 2).min(3));
        }
    }
}
