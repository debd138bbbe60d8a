//! Problem instances: synthetic generators, the Gaussian blur operator,
//! error metrics, and file I/O for tensors and solver traces.

mod blur;
mod metrics;
mod synthetic;

pub use blur::{blur_instance, gen_blur, BlurSpec};
pub use metrics::{psnr, rse, PSNR_CAP};
pub use synthetic::{gen_synthetic, gen_video_like, SyntheticSpec};

use crate::error::{Error, Result};
use crate::tensor::{fro_norm, t_pinv, t_product, Tensor3};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub use crate::tensor::io::{read_tensor, write_tensor};

/// Where an instance came from; carried along for log provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub kind: String,
    pub seed: Option<u64>,
    pub description: String,
}

/// A tensor linear system `A * X = B` with an optional known least-norm
/// solution `A^dagger * B`.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub a: Tensor3,
    pub b: Tensor3,
    /// `A^dagger * B`, the limit of every solver here when started from zero.
    pub x_star0: Option<Tensor3>,
    pub provenance: Provenance,
}

impl ProblemInstance {
    pub fn new(a: Tensor3, b: Tensor3, x_star0: Option<Tensor3>, provenance: Provenance) -> Result<Self> {
        if a.rows() != b.rows() || a.depth() != b.depth() {
            return Err(Error::dims(
                "ProblemInstance",
                format!("A {}x{}x{}", a.rows(), a.cols(), a.depth()),
                format!("B {}x{}x{}", b.rows(), b.cols(), b.depth()),
            ));
        }
        Ok(ProblemInstance {
            a,
            b,
            x_star0,
            provenance,
        })
    }

    /// Solution-space shape `(l, p, n)`.
    pub fn solution_shape(&self) -> (usize, usize, usize) {
        (self.a.cols(), self.b.cols(), self.a.depth())
    }
}

/// Least-norm solution `A^dagger * B` of a consistent system. Fails when the
/// residual reveals the system is not consistent.
pub fn least_norm_solution(a: &Tensor3, b: &Tensor3, rank_tol: f64) -> Result<Tensor3> {
    let x = t_product(&t_pinv(a, rank_tol), b)?;
    let residual = fro_norm(&(&t_product(a, &x)? - b));
    let scale = fro_norm(b);
    let tol = 1e-8;
    if scale > 0.0 && residual > tol * scale {
        return Err(Error::InconsistentSystem {
            residual: residual / scale,
            tol,
        });
    }
    Ok(x)
}

/// One row of a solver trace. `epoch` 0 is the initial state (no sweep yet),
/// so `delta` and `gamma` are absent there; `rse` is absent whenever the
/// least-norm solution is unknown.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub rse: Option<f64>,
    pub delta: Option<f64>,
    pub gamma: Option<f64>,
    pub elapsed_s: f64,
}

/// Writes trace rows as `epoch,rse,delta,gamma,elapsed_s` CSV.
pub fn write_trace_csv(path: &Path, records: &[EpochRecord]) -> Result<()> {
    let mut out = String::from("epoch,rse,delta,gamma,elapsed_s\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.epoch,
            fmt_opt(r.rse),
            fmt_opt(r.delta),
            fmt_opt(r.gamma),
            r.elapsed_s
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Per-run summary emitted next to each trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub solver: String,
    pub strategy: String,
    pub tau: String,
    pub epochs: usize,
    /// Epoch count normalized to full sweeps over the rows; differs from
    /// `epochs` only for block methods.
    pub full_iterations: f64,
    pub rse_final: Option<f64>,
    pub wall_s: f64,
    pub seed: u64,
}
