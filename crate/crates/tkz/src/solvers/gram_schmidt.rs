//! Gram-Schmidt implementation of the accelerated step.
//!
//! Instead of past iterates, the state keeps orthogonal search directions
//! `U_i`. Each epoch orthogonalizes the sweep direction `D_k` against the
//! most recent window (modified Gram-Schmidt: the remainder is updated after
//! every subtraction) and moves by `lambda_k = gamma_k / ||U_k||_F^2` along
//! the result. When the window is full the oldest basis tensor is
//! overwritten in place, so no iterate extraction or concatenation happens.

use super::projector::SweepResult;
use crate::tensor::{fro_norm2, inner, Tensor3};
use std::collections::VecDeque;

/// Relative floor under which the orthogonalized direction counts as a
/// numerical breakdown: `||U_k||^2 < 100 * eps * ||D_k||^2`.
pub(crate) const BREAKDOWN_FACTOR: f64 = 1e2 * f64::EPSILON;

#[derive(Debug, Clone)]
struct BasisEntry {
    u: Tensor3,
    norm2: f64,
}

/// Solver state for the Gram-Schmidt step: the iterate, the orthogonal
/// basis window with cached norms, and recent step sizes.
#[derive(Debug, Clone)]
pub struct GsState {
    x: Tensor3,
    basis: VecDeque<BasisEntry>,
    lambdas: Vec<f64>,
    /// `None` keeps every direction (the Arnoldi regime).
    tau: Option<usize>,
    epoch: usize,
    restarts: usize,
}

impl GsState {
    pub fn new(x0: Tensor3, tau: Option<usize>) -> Self {
        GsState {
            x: x0,
            basis: VecDeque::new(),
            lambdas: Vec::new(),
            tau,
            epoch: 0,
            restarts: 0,
        }
    }

    pub fn current(&self) -> &Tensor3 {
        &self.x
    }

    pub fn epoch(&self) -> usize {
        self.epoch
    }

    pub fn basis_len(&self) -> usize {
        self.basis.len()
    }

    /// Step sizes `lambda_k` in epoch order (used by the Arnoldi
    /// subdiagonal `h_{j+1,j} = -1/lambda_{j-1}`).
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// Number of breakdown restarts taken so far.
    pub fn restarts(&self) -> usize {
        self.restarts
    }

    pub fn basis_tensor(&self, i: usize) -> &Tensor3 {
        &self.basis[i].u
    }

    /// Orthogonalizes `D_k` against the newest `tau - 1` stored directions
    /// and advances the iterate. Requires `D_k != 0` (the caller stops on
    /// `delta == 0`).
    pub fn step(&mut self, sweep: &SweepResult) -> &Tensor3 {
        let d = sweep.direction(&self.x);
        let d_norm2 = sweep.delta;

        let keep = match self.tau {
            Some(tau) => (tau - 1).min(self.basis.len()),
            None => self.basis.len(),
        };
        let skip = self.basis.len() - keep;
        let mut u = d;
        for entry in self.basis.iter().skip(skip) {
            let coeff = inner(&entry.u, &u).expect("basis shapes match") / entry.norm2;
            u.axpy(-coeff, &entry.u);
        }
        let mut norm2 = fro_norm2(&u);

        if norm2 < BREAKDOWN_FACTOR * d_norm2 {
            // numerical breakdown: restart the window from the plain
            // line-search step at the current iterate
            self.basis.clear();
            u = sweep.direction(&self.x);
            norm2 = d_norm2;
            self.restarts += 1;
        }

        let lambda = sweep.gamma / norm2;
        self.x.axpy(lambda, &u);
        self.lambdas.push(lambda);

        if let Some(tau) = self.tau {
            if self.basis.len() == tau {
                // overwrite the oldest basis tensor
                self.basis.pop_front();
            }
        }
        self.basis.push_back(BasisEntry { u, norm2 });
        self.epoch += 1;
        &self.x
    }
}
