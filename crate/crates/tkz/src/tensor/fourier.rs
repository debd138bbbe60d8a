//! DFT of a tensor along the third mode.
//!
//! `bcirc(A)` is block-diagonalized by the unitary DFT, so the t-product and
//! the tensor pseudoinverse reduce to independent complex matrix operations
//! per frequency. For real tensors the slices obey conjugate symmetry
//! (`F[w] == conj(F[n - w])`), so only the first `n/2 + 1` frequencies are
//! computed; the rest are mirrored.

use crate::error::{Error, Result};
use crate::tensor::Tensor3;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

/// Frequency-domain view of a [`Tensor3`]: one complex `rows x cols` matrix
/// per frequency along the third mode.
#[derive(Debug, Clone)]
pub struct FourierSlices {
    rows: usize,
    cols: usize,
    depth: usize,
    slices: Vec<DMatrix<Complex64>>,
    conjugate_symmetric: bool,
}

impl FourierSlices {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// True when the slices were produced from a real tensor, in which case
    /// slice `w` and slice `(depth - w) % depth` are complex conjugates.
    pub fn conjugate_symmetric(&self) -> bool {
        self.conjugate_symmetric
    }

    pub fn slice(&self, w: usize) -> &DMatrix<Complex64> {
        &self.slices[w]
    }

    /// Number of frequencies that determine the rest under conjugate
    /// symmetry.
    pub fn unique_count(&self) -> usize {
        self.depth / 2 + 1
    }

    /// Assembles a full slice set from the unique half, mirroring the
    /// remaining frequencies as conjugates.
    pub(crate) fn from_unique(
        rows: usize,
        cols: usize,
        depth: usize,
        unique: Vec<DMatrix<Complex64>>,
    ) -> Self {
        let mut slices = Vec::with_capacity(depth);
        for w in 0..depth {
            let h = depth / 2 + 1;
            if w < h {
                slices.push(unique[w].clone());
            } else {
                slices.push(unique[depth - w].map(|z| z.conj()));
            }
        }
        FourierSlices {
            rows,
            cols,
            depth,
            slices,
            conjugate_symmetric: true,
        }
    }

    /// Slicewise complex matrix product; the Fourier-domain form of the
    /// t-product.
    pub fn slicewise_product(&self, rhs: &FourierSlices) -> Result<FourierSlices> {
        if self.cols != rhs.rows || self.depth != rhs.depth {
            return Err(Error::dims(
                "slicewise_product",
                format!("{}x{}x{}", self.rows, self.cols, self.depth),
                format!("{}x{}x{}", rhs.rows, rhs.cols, rhs.depth),
            ));
        }
        if self.conjugate_symmetric && rhs.conjugate_symmetric {
            let h = self.unique_count();
            let unique: Vec<_> = (0..h).map(|w| &self.slices[w] * &rhs.slices[w]).collect();
            Ok(FourierSlices::from_unique(self.rows, rhs.cols, self.depth, unique))
        } else {
            let slices: Vec<_> = (0..self.depth)
                .map(|w| &self.slices[w] * &rhs.slices[w])
                .collect();
            Ok(FourierSlices {
                rows: self.rows,
                cols: rhs.cols,
                depth: self.depth,
                slices,
                conjugate_symmetric: false,
            })
        }
    }

    /// Slicewise Moore-Penrose pseudoinverse with per-slice relative rank
    /// truncation.
    pub fn slicewise_pinv(&self, rank_tol: f64) -> FourierSlices {
        let h = if self.conjugate_symmetric {
            self.unique_count()
        } else {
            self.depth
        };
        let unique: Vec<_> = (0..h).map(|w| pinv_complex(&self.slices[w], rank_tol)).collect();
        if self.conjugate_symmetric {
            FourierSlices::from_unique(self.cols, self.rows, self.depth, unique)
        } else {
            FourierSlices {
                rows: self.cols,
                cols: self.rows,
                depth: self.depth,
                slices: unique,
                conjugate_symmetric: false,
            }
        }
    }
}

/// Complex pseudoinverse with singular values truncated at
/// `rank_tol * sigma_max` of this matrix.
pub(crate) fn pinv_complex(m: &DMatrix<Complex64>, rank_tol: f64) -> DMatrix<Complex64> {
    let svd = crate::tensor::jacobi::jacobi_svd_complex(m);
    let smax = svd.sigma.iter().cloned().fold(0.0f64, f64::max);
    let mut out = DMatrix::zeros(m.ncols(), m.nrows());
    if smax == 0.0 {
        return out;
    }
    // V diag(1/sigma) U^H over the kept spectrum
    for k in 0..svd.sigma.len() {
        let s = svd.sigma[k];
        if s > rank_tol * smax {
            let inv = 1.0 / s;
            for r in 0..m.ncols() {
                let v_rk = svd.v[(r, k)] * inv;
                for c in 0..m.nrows() {
                    out[(r, c)] += v_rk * svd.u[(c, k)].conj();
                }
            }
        }
    }
    out
}

/// DFT along the third mode.
pub fn to_fourier(a: &Tensor3) -> FourierSlices {
    let (m, l, n) = a.shape();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let mut slices = vec![DMatrix::<Complex64>::zeros(m, l); n];
    let mut tube = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..l {
        for i in 0..m {
            for (s, t) in tube.iter_mut().enumerate() {
                *t = Complex64::new(a.get(i, j, s), 0.0);
            }
            fft.process(&mut tube);
            for (w, t) in tube.iter().enumerate() {
                slices[w][(i, j)] = *t;
            }
        }
    }
    FourierSlices {
        rows: m,
        cols: l,
        depth: n,
        slices,
        conjugate_symmetric: true,
    }
}

/// Inverse DFT along the third mode; the imaginary residue of a symmetric
/// slice set is dropped.
pub fn from_fourier(f: &FourierSlices) -> Tensor3 {
    let (m, l, n) = (f.rows, f.cols, f.depth);
    let mut planner = FftPlanner::new();
    let ifft = planner.plan_fft_inverse(n);
    let mut out = Tensor3::zeros(m, l, n);
    let mut tube = vec![Complex64::new(0.0, 0.0); n];
    let scale = 1.0 / n as f64;
    for j in 0..l {
        for i in 0..m {
            for (w, t) in tube.iter_mut().enumerate() {
                *t = f.slices[w][(i, j)];
            }
            ifft.process(&mut tube);
            for (s, t) in tube.iter().enumerate() {
                out.set(i, j, s, t.re * scale);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{bcirc, fold, t_product, unfold, Tensor3};
    use crate::testutil::{rand_tensor, rel_err_tensor};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Naive O(n^2) reference DFT of one tube.
    fn dft_tube(x: &[f64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|w| {
                (0..n)
                    .map(|s| {
                        let ang = -2.0 * std::f64::consts::PI * (w * s) as f64 / n as f64;
                        Complex64::new(ang.cos(), ang.sin()) * x[s]
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn depth_one_roundtrip_is_identity() {
        let a = Tensor3::from_values(2, 2, 1, vec![1., 2., 3., 4.]).unwrap();
        let back = from_fourier(&to_fourier(&a));
        assert!(rel_err_tensor(&back, &a) < 1e-15);
    }

    #[test]
    fn constant_tube_concentrates_in_slice_zero() {
        let a = Tensor3::from_fn(2, 2, 4, |i, j, _| (i + 2 * j) as f64 + 1.0);
        let f = to_fourier(&a);
        for w in 1..4 {
            assert!(f.slice(w).iter().all(|z| z.norm() < 1e-12));
        }
        assert!(f.slice(0).iter().all(|z| z.norm() > 0.5));
    }

    #[test]
    fn roundtrip_matches_reference_dft() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a = rand_tensor(&mut rng, 3, 2, 5);
        let f = to_fourier(&a);
        for i in 0..3 {
            for j in 0..2 {
                let tube: Vec<f64> = (0..5).map(|s| a.get(i, j, s)).collect();
                let reference = dft_tube(&tube);
                for w in 0..5 {
                    assert!((f.slice(w)[(i, j)] - reference[w]).norm() < 1e-12);
                }
            }
        }
        let back = from_fourier(&f);
        assert!(rel_err_tensor(&back, &a) < 1e-12);
    }

    #[test]
    fn conjugate_symmetry_holds_for_real_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let a = rand_tensor(&mut rng, 2, 3, 6);
        let f = to_fourier(&a);
        assert!(f.conjugate_symmetric());
        for w in 0..6 {
            let mirror = (6 - w) % 6;
            let d = f.slice(w) - f.slice(mirror).map(|z| z.conj());
            assert!(d.iter().all(|z| z.norm() < 1e-10));
        }
    }

    #[test]
    fn fourier_product_matches_bcirc_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let a = rand_tensor(&mut rng, 3, 4, 4);
        let b = rand_tensor(&mut rng, 4, 2, 4);
        let fast = t_product(&a, &b).unwrap();
        let dense = fold(&(bcirc(&a) * unfold(&b)), 4).unwrap();
        assert!(rel_err_tensor(&fast, &dense) < 1e-12);
    }
}
