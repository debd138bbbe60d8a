//! Gaussian blur operator with Toeplitz structure.
//!
//! `M1` is the symmetric Toeplitz matrix of the truncated Gaussian profile
//! `z1 = [exp(-(0:band-1).^2 / (2 sigma^2)), zeros(1, l-band)]`, `M2` the
//! Toeplitz matrix with first column `z1` and first row
//! `[z1(1), fliplr(z1(2:end))]` (the circulant completion of `z1`), both
//! scaled by `1/sqrt(2 pi sigma)`. Frontal slice `j` of the operator is
//! `M2(j, 1) * M1`, so the blur acts within each frame through `M1` and
//! couples neighboring frames through the leading column of `M2`.

use super::{ProblemInstance, Provenance};
use crate::error::{Error, Result};
use crate::tensor::{t_product, Tensor3};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlurSpec {
    /// Image side length; slices are `l x l`.
    pub l: usize,
    /// Number of frames (third dimension).
    pub n: usize,
    /// Bandwidth of the Toeplitz blocks.
    pub band: usize,
    /// Standard deviation of the Gaussian point-spread function.
    pub sigma: f64,
}

impl Default for BlurSpec {
    fn default() -> Self {
        BlurSpec {
            l: 0,
            n: 0,
            band: 6,
            sigma: 1.8,
        }
    }
}

impl BlurSpec {
    fn validate(&self) -> Result<()> {
        if self.band == 0 || self.band > self.l {
            return Err(Error::InvalidArgument {
                op: "gen_blur",
                msg: format!("band={} must be in 1..=l={}", self.band, self.l),
            });
        }
        if self.n == 0 || self.n > self.l {
            return Err(Error::InvalidArgument {
                op: "gen_blur",
                msg: format!("depth n={} must be in 1..=l={} (slice scales come from M2's first column)", self.n, self.l),
            });
        }
        if !(self.sigma > 0.0) {
            return Err(Error::InvalidArgument {
                op: "gen_blur",
                msg: format!("sigma={} must be positive", self.sigma),
            });
        }
        Ok(())
    }

    fn profile(&self) -> Vec<f64> {
        (0..self.l)
            .map(|k| {
                if k < self.band {
                    (-((k * k) as f64) / (2.0 * self.sigma * self.sigma)).exp()
                } else {
                    0.0
                }
            })
            .collect()
    }
}

/// The in-frame blur matrix `M1`.
pub fn blur_m1(spec: &BlurSpec) -> Result<DMatrix<f64>> {
    spec.validate()?;
    let z1 = spec.profile();
    let c = 1.0 / (2.0 * std::f64::consts::PI * spec.sigma).sqrt();
    Ok(DMatrix::from_fn(spec.l, spec.l, |i, j| {
        c * z1[i.abs_diff(j)]
    }))
}

/// The cross-frame Toeplitz matrix `M2` (first column `z1`, first row its
/// flipped tail).
pub fn blur_m2(spec: &BlurSpec) -> Result<DMatrix<f64>> {
    spec.validate()?;
    let z1 = spec.profile();
    let c = 1.0 / (2.0 * std::f64::consts::PI * spec.sigma).sqrt();
    let l = spec.l;
    // first row: [z1(1), z1(l), z1(l-1), ..., z1(2)]
    Ok(DMatrix::from_fn(l, l, |i, j| {
        if i >= j {
            c * z1[i - j]
        } else {
            c * z1[l - (j - i)]
        }
    }))
}

/// Blur tensor `A` with frontal slices `A_{::j} = M2(j, 1) * M1`.
pub fn gen_blur(spec: &BlurSpec) -> Result<Tensor3> {
    spec.validate()?;
    let m1 = blur_m1(spec)?;
    let m2 = blur_m2(spec)?;
    Ok(Tensor3::from_fn(spec.l, spec.l, spec.n, |i, j, s| {
        m2[(s, 0)] * m1[(i, j)]
    }))
}

/// Blurred observation plus provenance for a deblurring run:
/// `B = A * X^*` with the supplied ground truth.
pub fn blur_instance(spec: &BlurSpec, truth: &Tensor3, rank_tol: f64) -> Result<ProblemInstance> {
    let a = gen_blur(spec)?;
    if truth.rows() != spec.l || truth.depth() != spec.n {
        return Err(Error::dims(
            "blur_instance",
            format!("A {}x{}x{}", spec.l, spec.l, spec.n),
            format!("truth {}x{}x{}", truth.rows(), truth.cols(), truth.depth()),
        ));
    }
    let b = t_product(&a, truth)?;
    let x_star0 = super::least_norm_solution(&a, &b, rank_tol)?;
    ProblemInstance::new(
        a,
        b,
        Some(x_star0),
        Provenance {
            kind: "blur".into(),
            seed: None,
            description: format!("l={} n={} band={} sigma={}", spec.l, spec.n, spec.band, spec.sigma),
        },
    )
}
