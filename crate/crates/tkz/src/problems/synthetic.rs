//! Synthetic instance generator.
//!
//! Every frontal slice of `A` is `U_i D_i V_i^T` with orthonormal factors
//! from thin QR of Gaussian draws and `D_i = diag(1 + (kappa - 1) * u)`,
//! `u ~ Uniform(0, 1)`, so each slice has rank at most `r` and condition
//! number at most `kappa`. The ground-truth solution is Gaussian and
//! `B = A * X^*`, which makes the system consistent by construction.

use super::{least_norm_solution, ProblemInstance, Provenance};
use crate::error::{Error, Result};
use crate::sampling::{seeded_rng, streams};
use crate::tensor::{t_product, Tensor3};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub m: usize,
    pub l: usize,
    pub n: usize,
    pub p: usize,
    /// Target rank of every frontal slice.
    pub r: usize,
    /// Upper bound on every slice's condition number; must exceed 1.
    pub kappa: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    fn validate(&self) -> Result<()> {
        if self.m == 0 || self.l == 0 || self.n == 0 || self.p == 0 {
            return Err(Error::InvalidArgument {
                op: "gen_synthetic",
                msg: "all dimensions must be positive".into(),
            });
        }
        if self.r == 0 || self.r > self.m.min(self.l) {
            return Err(Error::InvalidArgument {
                op: "gen_synthetic",
                msg: format!("rank r={} must be in 1..=min(m, l)={}", self.r, self.m.min(self.l)),
            });
        }
        if !(self.kappa > 1.0) {
            return Err(Error::InvalidArgument {
                op: "gen_synthetic",
                msg: format!("kappa={} must exceed 1", self.kappa),
            });
        }
        Ok(())
    }
}

fn randn_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

fn thin_q(m: DMatrix<f64>) -> DMatrix<f64> {
    m.qr().q()
}

pub fn gen_synthetic(spec: &SyntheticSpec) -> Result<ProblemInstance> {
    spec.validate()?;
    let mut a = Tensor3::zeros(spec.m, spec.l, spec.n);
    // Per-slice substreams keep slice i identical no matter how many slices
    // an instance has.
    for s in 0..spec.n {
        let mut rng = seeded_rng(spec.seed, streams::SLICE_BASE + s as u64);
        let u = thin_q(randn_matrix(&mut rng, spec.m, spec.r));
        let v = thin_q(randn_matrix(&mut rng, spec.l, spec.r));
        let d: Vec<f64> = (0..spec.r)
            .map(|_| 1.0 + (spec.kappa - 1.0) * rng.gen::<f64>())
            .collect();
        for j in 0..spec.l {
            for i in 0..spec.m {
                let mut acc = 0.0;
                for (t, dt) in d.iter().enumerate() {
                    acc += u[(i, t)] * dt * v[(j, t)];
                }
                a.set(i, j, s, acc);
            }
        }
    }

    let mut rng = seeded_rng(spec.seed, streams::GROUND_TRUTH);
    let x_true = Tensor3::from_fn(spec.l, spec.p, spec.n, |_, _, _| rng.sample(StandardNormal));
    let b = t_product(&a, &x_true)?;
    let x_star0 = least_norm_solution(&a, &b, 1e-12)?;

    ProblemInstance::new(
        a,
        b,
        Some(x_star0),
        Provenance {
            kind: "synthetic".into(),
            seed: Some(spec.seed),
            description: format!(
                "m={} l={} n={} p={} r={} kappa={}",
                spec.m, spec.l, spec.n, spec.p, spec.r, spec.kappa
            ),
        },
    )
}

/// Smooth moving-blob frames in `[0, 1]`; a stand-in for video ground truth
/// in deblurring runs.
pub fn gen_video_like(l: usize, p: usize, n: usize, seed: u64) -> Tensor3 {
    let mut rng = seeded_rng(seed, streams::GROUND_TRUTH);
    let blobs = 3;
    let params: Vec<(f64, f64, f64, f64, f64)> = (0..blobs)
        .map(|_| {
            (
                rng.gen::<f64>() * l as f64,        // start row
                rng.gen::<f64>() * p as f64,        // start col
                (rng.gen::<f64>() - 0.5) * 2.0,     // row velocity
                (rng.gen::<f64>() - 0.5) * 2.0,     // col velocity
                2.0 + rng.gen::<f64>() * (l.min(p) as f64 / 4.0), // width
            )
        })
        .collect();
    let mut t = Tensor3::from_fn(l, p, n, |i, j, s| {
        let mut v = 0.1 + 0.1 * (i + j) as f64 / (l + p) as f64;
        for &(ci, cj, vi, vj, w) in &params {
            let ri = (ci + vi * s as f64).rem_euclid(l as f64);
            let rj = (cj + vj * s as f64).rem_euclid(p as f64);
            let d2 = (i as f64 - ri).powi(2) + (j as f64 - rj).powi(2);
            v += (-d2 / (2.0 * w * w)).exp();
        }
        v
    });
    let peak = t.max_abs();
    if peak > 0.0 {
        let inv = 1.0 / peak;
        for v in t.values_mut() {
            *v *= inv;
        }
    }
    t
}
