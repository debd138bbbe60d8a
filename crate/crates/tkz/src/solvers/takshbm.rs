//! Tensor average-block Kaczmarz with stochastic heavy-ball momentum.
//!
//! Comparison baseline: `X^{k+1} = X^k - alpha_k grad_S(X^k)
//! + beta_k (X^k - X^{k-1})` where the block gradient is
//! `A_S^T * (A_S * X^k - B_S)` over a block `S` of `q` rows drawn with
//! probability `||A_S||_F^2 / ||A||_F^2` from a fixed partition of the rows.
//! The step pair `(alpha_k, momentum beta_k)` comes from the exact
//! two-direction line search against the least-norm solution, which is why
//! this method needs the ground truth as an input. The paper's rate quantity
//! `beta_k` is unrelated; it lives in the analysis module as `rate_beta`.

use crate::error::{Error, Result};
use crate::problems::ProblemInstance;
use crate::sampling::{seeded_rng, streams};
use crate::tensor::{fro_norm2, inner, t_product, t_transpose, Tensor3};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub struct TakshbmState {
    x_prev: Tensor3,
    x: Tensor3,
    x_star0: Tensor3,
    /// Per block: the row sub-tensor, its transpose, and the RHS rows.
    blocks: Vec<(Tensor3, Tensor3, Tensor3)>,
    /// Cumulative squared-norm weights for the block draw.
    cumulative: Vec<f64>,
    rng: ChaCha8Rng,
    iteration: usize,
    pub block_size: usize,
    row_count: usize,
}

fn rows_subtensor(t: &Tensor3, lo: usize, hi: usize) -> Tensor3 {
    Tensor3::from_fn(hi - lo, t.cols(), t.depth(), |i, j, s| t.get(lo + i, j, s))
}

impl TakshbmState {
    /// Partitions the rows into consecutive blocks of `q` (the last block
    /// keeps the remainder).
    pub fn new(problem: &ProblemInstance, x0: Tensor3, q: usize, seed: u64) -> Result<Self> {
        let x_star0 = problem.x_star0.clone().ok_or(Error::InvalidArgument {
            op: "takshbm",
            msg: "the exact line search needs the least-norm solution".into(),
        })?;
        let m = problem.a.rows();
        if q == 0 {
            return Err(Error::InvalidArgument {
                op: "takshbm",
                msg: "block size q must be positive".into(),
            });
        }
        let mut blocks = Vec::new();
        let mut cumulative = Vec::new();
        let mut acc = 0.0;
        let mut lo = 0;
        while lo < m {
            let hi = (lo + q).min(m);
            let a_s = rows_subtensor(&problem.a, lo, hi);
            let b_s = rows_subtensor(&problem.b, lo, hi);
            acc += fro_norm2(&a_s);
            cumulative.push(acc);
            blocks.push((t_transpose(&a_s), a_s, b_s));
            lo = hi;
        }
        // normalize to ||A||_F^2
        for c in &mut cumulative {
            *c /= acc;
        }
        Ok(TakshbmState {
            x_prev: x0.clone(),
            x: x0,
            x_star0,
            blocks,
            cumulative,
            rng: seeded_rng(seed, streams::BLOCK_SAMPLER),
            iteration: 0,
            block_size: q,
            row_count: m,
        })
    }

    pub fn current(&self) -> &Tensor3 {
        &self.x
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// Iterations normalized by `q / m`, the paper's unit for comparing
    /// block methods against full sweeps.
    pub fn full_iterations(&self) -> f64 {
        self.iteration as f64 * self.block_size as f64 / self.row_count as f64
    }

    fn draw_block(&mut self) -> usize {
        let u: f64 = self.rng.gen();
        self.cumulative
            .iter()
            .position(|c| u < *c)
            .unwrap_or(self.blocks.len() - 1)
    }

    pub fn step(&mut self) -> Result<&Tensor3> {
        let idx = self.draw_block();
        let (at_s, a_s, b_s) = &self.blocks[idx];
        let residual = &t_product(a_s, &self.x)? - b_s;
        let grad = t_product(at_s, &residual)?;
        let momentum = &self.x - &self.x_prev;
        let err = &self.x - &self.x_star0;

        let gg = fro_norm2(&grad);
        let mm = fro_norm2(&momentum);
        let ge = inner(&grad, &err)?;

        let (alpha, beta) = if self.iteration == 0 || mm == 0.0 {
            // no momentum direction yet: one-dimensional exact step
            if gg == 0.0 {
                (0.0, 0.0)
            } else {
                (ge / gg, 0.0)
            }
        } else {
            let gm = inner(&grad, &momentum)?;
            let me = inner(&momentum, &err)?;
            let det = gg * mm - gm * gm;
            if det <= 1e2 * f64::EPSILON * gg * mm || gg == 0.0 {
                // nearly parallel directions: fall back to the gradient-only
                // step
                if gg == 0.0 {
                    (0.0, 0.0)
                } else {
                    (ge / gg, 0.0)
                }
            } else {
                // minimize ||err - alpha grad + beta momentum||_F^2
                let alpha = (ge * mm - gm * me) / det;
                let beta = (gm * ge - gg * me) / det;
                (alpha, beta)
            }
        };

        let mut next = self.x.clone();
        next.axpy(-alpha, &grad);
        next.axpy(beta, &momentum);
        self.x_prev = std::mem::replace(&mut self.x, next);
        self.iteration += 1;
        Ok(&self.x)
    }
}
