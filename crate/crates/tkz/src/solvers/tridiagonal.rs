//! Tridiagonal implementation of the accelerated step.
//!
//! Keeps the window of past iterates and solves the blocked normal system
//! through the closed-form tridiagonal inverse of `V_k^T V_k`, whose nonzero
//! entries are built from the stored products `gamma_i * s_i` (each equal to
//! `||X^{i+1} - X^i||_F^2`). The window is maintained exactly as the
//! extract-oldest/append-newest scheme it mirrors, which is what makes this
//! variant memory-heavier than the Gram-Schmidt one despite identical
//! iterates.

use super::gram_schmidt::BREAKDOWN_FACTOR;
use super::projector::SweepResult;
use crate::tensor::{inner, Tensor3};
use nalgebra::{DMatrix, DVector};
use std::collections::VecDeque;

#[derive(Debug, Clone)]
pub struct TriState {
    /// Stored iterates `X^{j_k,tau}..X^k`, oldest first.
    window: VecDeque<Tensor3>,
    /// `gamma_i * s_i` for the increments between consecutive stored
    /// iterates; always `window.len() - 1` entries.
    gs_products: VecDeque<f64>,
    tau: Option<usize>,
    epoch: usize,
    restarts: usize,
    lambdas: Vec<f64>,
}

impl TriState {
    pub fn new(x0: Tensor3, tau: Option<usize>) -> Self {
        let mut window = VecDeque::new();
        window.push_back(x0);
        TriState {
            window,
            gs_products: VecDeque::new(),
            tau,
            epoch: 0,
            restarts: 0,
            lambdas: Vec::new(),
        }
    }

    pub fn current(&self) -> &Tensor3 {
        self.window.back().expect("window never empty")
    }

    pub fn window_len(&self) -> usize {
        self.window.len()
    }

    pub fn restarts(&self) -> usize {
        self.restarts
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// Explicit tridiagonal form of `(V_k^T V_k)^{-1}` from the stored
    /// products; `q` is the number of V columns.
    pub(crate) fn tridiagonal_inverse(&self, q: usize) -> DMatrix<f64> {
        let inv: Vec<f64> = self.gs_products.iter().map(|v| 1.0 / v).collect();
        let mut t = DMatrix::zeros(q, q);
        for i in 0..q {
            t[(i, i)] = if i == 0 { inv[0] } else { inv[i - 1] + inv[i] };
        }
        for i in 0..q.saturating_sub(1) {
            t[(i, i + 1)] = -inv[i];
            t[(i + 1, i)] = -inv[i];
        }
        t
    }

    /// One accelerated update. Requires `delta_k > 0`.
    pub fn step(&mut self, sweep: &SweepResult) -> &Tensor3 {
        let x = self.current().clone();
        let d = sweep.direction(&x);
        let q = self.window.len() - 1;

        let (s_under, s_over) = if q == 0 {
            (sweep.gamma / sweep.delta, DVector::zeros(0))
        } else {
            // w = V^T d via tensor inner products
            let w = DVector::from_fn(q, |i, _| {
                inner(&(&self.window[i] - &x), &d).expect("window shapes match")
            });
            let t = self.tridiagonal_inverse(q);
            let tw = &t * &w;
            let denom = sweep.delta - w.dot(&tw);
            if !(denom >= BREAKDOWN_FACTOR * sweep.delta) || self.gs_products.iter().any(|v| *v <= 0.0) {
                // breakdown: collapse the window to the current iterate and
                // take the plain line-search step
                self.window.clear();
                self.window.push_back(x.clone());
                self.gs_products.clear();
                self.restarts += 1;
                (sweep.gamma / sweep.delta, DVector::zeros(0))
            } else {
                let s_under = sweep.gamma / denom;
                (s_under, -tw * s_under)
            }
        };

        let mut next = x.clone();
        for (i, coeff) in s_over.iter().enumerate() {
            let diff = &self.window[i] - &x;
            next.axpy(*coeff, &diff);
        }
        next.axpy(s_under, &d);

        self.gs_products.push_back(sweep.gamma * s_under);
        self.window.push_back(next);
        if let Some(tau) = self.tau {
            // extract the oldest iterate, keep at most tau
            while self.window.len() > tau {
                self.window.pop_front();
                self.gs_products.pop_front();
            }
        }
        self.lambdas.push(s_under);
        self.epoch += 1;
        self.current()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Permutation;
    use crate::solvers::gram_schmidt::GsState;
    use crate::solvers::projector::ProjectorBank;
    use crate::tensor::{fro_norm, t_product, unfold, Tensor3};
    use crate::testutil::rand_tensor;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bank_for(rng: &mut ChaCha8Rng, m: usize, l: usize, p: usize, n: usize) -> ProjectorBank {
        let a = rand_tensor(rng, m, l, n);
        let x_true = rand_tensor(rng, l, p, n);
        let b = t_product(&a, &x_true).unwrap();
        ProjectorBank::build(&a, &b, 1e-12).unwrap()
    }

    #[test]
    fn tau_one_matches_gram_schmidt_tau_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        let bank = bank_for(&mut rng, 5, 4, 2, 2);
        let mut tri = TriState::new(Tensor3::zeros(4, 2, 2), Some(1));
        let mut gs = GsState::new(Tensor3::zeros(4, 2, 2), Some(1));
        for _ in 0..5 {
            let sweep = bank.sweep(&tri.current().clone(), &Permutation::identity(5)).unwrap();
            let a = tri.step(&sweep).clone();
            let b = gs.step(&sweep).clone();
            assert!(fro_norm(&(&a - &b)) <= 1e-13 * fro_norm(&a).max(1.0));
        }
    }

    #[test]
    fn tridiagonal_inverse_matches_dense_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(92);
        let bank = bank_for(&mut rng, 8, 6, 2, 2);
        let mut tri = TriState::new(Tensor3::zeros(6, 2, 2), Some(4));
        for _ in 0..6 {
            let sweep = bank.sweep(&tri.current().clone(), &Permutation::identity(8)).unwrap();
            tri.step(&sweep);
        }
        // V columns from the stored window
        let x = tri.current().clone();
        let q = tri.window_len() - 1;
        assert!(q >= 2);
        let cols: Vec<_> = (0..q)
            .map(|i| unfold(&(&tri.window[i] - &x)))
            .collect();
        let mut vtv = DMatrix::zeros(q, q);
        for i in 0..q {
            for j in 0..q {
                vtv[(i, j)] = cols[i].dot(&cols[j]);
            }
        }
        let dense = vtv.try_inverse().expect("full column rank window");
        let closed = tri.tridiagonal_inverse(q);
        let rel = (&dense - &closed).norm() / dense.norm();
        assert!(rel < 1e-6, "tridiagonal vs dense inverse rel err {}", rel);
    }

    #[test]
    fn window_respects_tau() {
        let mut rng = ChaCha8Rng::seed_from_u64(93);
        let bank = bank_for(&mut rng, 6, 5, 2, 2);
        let mut tri = TriState::new(Tensor3::zeros(5, 2, 2), Some(3));
        for k in 0..7 {
            let sweep = bank.sweep(&tri.current().clone(), &Permutation::identity(6)).unwrap();
            tri.step(&sweep);
            assert_eq!(tri.window_len(), (k + 2).min(3));
            assert_eq!(tri.gs_products.len(), tri.window_len() - 1);
        }
    }
}
