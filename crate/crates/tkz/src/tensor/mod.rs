//! Third-order tensor container and t-product algebra.
//!
//! A [`Tensor3`] is a dense real tensor of shape `rows x cols x depth`. Its
//! frontal slices (fixed third index) are ordinary matrices; the t-product of
//! two tensors is `fold(bcirc(A) * unfold(B))`, i.e. ordinary matrix
//! multiplication of the block-circulant expansion. Because a block-circulant
//! matrix is block-diagonalized by the DFT along the third mode, the
//! production paths here run slicewise in the Fourier domain
//! ([`to_fourier`] / [`from_fourier`]), while the dense `bcirc` route is kept
//! for tests and desk-scale verification.
//!
//! Storage is slice-major and column-major within each slice, so `tv` (the
//! tube-wise vectorization) is exactly the backing buffer and `unfold` is a
//! reshape.

mod fourier;
pub mod io;
pub(crate) mod jacobi;

pub use fourier::{from_fourier, to_fourier, FourierSlices};

use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Dense third-order real tensor.
///
/// Invariants: `values.len() == rows * cols * depth`; constructors taking
/// external data reject non-finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    rows: usize,
    cols: usize,
    depth: usize,
    values: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(rows: usize, cols: usize, depth: usize) -> Self {
        Tensor3 {
            rows,
            cols,
            depth,
            values: vec![0.0; rows * cols * depth],
        }
    }

    /// Builds a tensor from a flat buffer in the canonical layout
    /// (slice-major, column-major within each frontal slice).
    pub fn from_values(rows: usize, cols: usize, depth: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != rows * cols * depth {
            return Err(Error::InvalidArgument {
                op: "Tensor3::from_values",
                msg: format!(
                    "buffer length {} does not match {}x{}x{}",
                    values.len(),
                    rows,
                    cols,
                    depth
                ),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Tensor3 {
            rows,
            cols,
            depth,
            values,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, depth: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut t = Tensor3::zeros(rows, cols, depth);
        for s in 0..depth {
            for j in 0..cols {
                for i in 0..rows {
                    t.values[i + j * rows + s * rows * cols] = f(i, j, s);
                }
            }
        }
        t
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.rows, self.cols, self.depth)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, s: usize) -> f64 {
        self.values[i + j * self.rows + s * self.rows * self.cols]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, s: usize, v: f64) {
        self.values[i + j * self.rows + s * self.rows * self.cols] = v;
    }

    /// Tube-wise vectorization: column-major vectorizations of the frontal
    /// slices concatenated in slice order. With this crate's layout it is the
    /// backing buffer itself.
    pub fn tv(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn frontal_slice(&self, s: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j, s))
    }

    /// Horizontal slice `A_{i::}` as a `1 x cols x depth` tensor.
    pub fn row_slice(&self, i: usize) -> Tensor3 {
        Tensor3::from_fn(1, self.cols, self.depth, |_, j, s| self.get(i, j, s))
    }

    /// Lateral slice `A_{:j:}` as a `rows x 1 x depth` tensor.
    pub fn lateral_slice(&self, j: usize) -> Tensor3 {
        Tensor3::from_fn(self.rows, 1, self.depth, |i, _, s| self.get(i, j, s))
    }

    /// Concatenates tensors side by side (along the second mode).
    pub fn hconcat(parts: &[&Tensor3]) -> Result<Tensor3> {
        let first = parts.first().ok_or(Error::InvalidArgument {
            op: "hconcat",
            msg: "no tensors given".into(),
        })?;
        let (rows, depth) = (first.rows, first.depth);
        let mut cols = 0;
        for t in parts {
            if t.rows != rows || t.depth != depth {
                return Err(Error::dims("hconcat", first.shape_string(), t.shape_string()));
            }
            cols += t.cols;
        }
        let mut out = Tensor3::zeros(rows, cols, depth);
        let mut offset = 0;
        for t in parts {
            for s in 0..depth {
                for j in 0..t.cols {
                    for i in 0..rows {
                        out.set(i, offset + j, s, t.get(i, j, s));
                    }
                }
            }
            offset += t.cols;
        }
        Ok(out)
    }

    fn shape_string(&self) -> String {
        format!("{}x{}x{}", self.rows, self.cols, self.depth)
    }

    pub fn scale(&self, a: f64) -> Tensor3 {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= a;
        }
        out
    }

    /// In-place `self += a * other`.
    pub fn axpy(&mut self, a: f64, other: &Tensor3) {
        debug_assert_eq!(self.shape(), other.shape());
        for (x, y) in self.values.iter_mut().zip(&other.values) {
            *x += a * y;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl std::ops::Add for &Tensor3 {
    type Output = Tensor3;
    fn add(self, rhs: &Tensor3) -> Tensor3 {
        assert_eq!(self.shape(), rhs.shape(), "tensor add shape mismatch");
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

impl std::ops::Sub for &Tensor3 {
    type Output = Tensor3;
    fn sub(self, rhs: &Tensor3) -> Tensor3 {
        assert_eq!(self.shape(), rhs.shape(), "tensor sub shape mismatch");
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

/// Block circulant matrix of `A`: block `(i, j)` is the frontal slice with
/// index `(i - j) mod depth`.
pub fn bcirc(a: &Tensor3) -> DMatrix<f64> {
    let (m, l, n) = a.shape();
    let mut out = DMatrix::zeros(m * n, l * n);
    for bi in 0..n {
        for bj in 0..n {
            let s = (bi + n - bj) % n;
            for j in 0..l {
                for i in 0..m {
                    out[(bi * m + i, bj * l + j)] = a.get(i, j, s);
                }
            }
        }
    }
    out
}

/// Stacks the frontal slices vertically into a `(rows * depth) x cols` matrix.
pub fn unfold(a: &Tensor3) -> DMatrix<f64> {
    let (m, l, n) = a.shape();
    DMatrix::from_fn(m * n, l, |r, j| a.get(r % m, j, r / m))
}

/// Inverse of [`unfold`]: the row count must be divisible by `depth`.
pub fn fold(mat: &DMatrix<f64>, depth: usize) -> Result<Tensor3> {
    if depth == 0 || mat.nrows() % depth != 0 {
        return Err(Error::dims(
            "fold",
            format!("{}x{}", mat.nrows(), mat.ncols()),
            format!("depth {}", depth),
        ));
    }
    let m = mat.nrows() / depth;
    Ok(Tensor3::from_fn(m, mat.ncols(), depth, |i, j, s| mat[(s * m + i, j)]))
}

/// t-product `A * B`, computed slicewise in the Fourier domain. Equal to
/// `fold(bcirc(A) * unfold(B))`.
pub fn t_product(a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
    if a.cols() != b.rows() || a.depth() != b.depth() {
        return Err(Error::dims("t_product", a.shape_string(), b.shape_string()));
    }
    let fa = to_fourier(a);
    let fb = to_fourier(b);
    let fc = fa.slicewise_product(&fb)?;
    Ok(from_fourier(&fc))
}

/// Tensor transpose: every frontal slice transposed and slices `2..n`
/// reversed, so that `bcirc(A^T) = bcirc(A)^T`.
pub fn t_transpose(a: &Tensor3) -> Tensor3 {
    let (m, l, n) = a.shape();
    Tensor3::from_fn(l, m, n, |i, j, s| {
        let src = if s == 0 { 0 } else { n - s };
        a.get(j, i, src)
    })
}

/// Identity tensor: first frontal slice is `I`, the rest are zero.
pub fn t_identity(size: usize, depth: usize) -> Tensor3 {
    let mut t = Tensor3::zeros(size, size, depth);
    for i in 0..size {
        t.set(i, i, 0, 1.0);
    }
    t
}

/// Entrywise inner product of two same-shape tensors.
pub fn inner(a: &Tensor3, b: &Tensor3) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::dims("inner", a.shape_string(), b.shape_string()));
    }
    Ok(a.values.iter().zip(&b.values).map(|(x, y)| x * y).sum())
}

pub fn fro_norm(a: &Tensor3) -> f64 {
    a.values.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Squared Frobenius norm.
pub fn fro_norm2(a: &Tensor3) -> f64 {
    a.values.iter().map(|v| v * v).sum::<f64>()
}

/// Tensor Moore-Penrose pseudoinverse, defined through
/// `bcirc(A^dagger) = bcirc(A)^dagger` and computed as a slicewise complex
/// pseudoinverse in the Fourier domain. Within every Fourier slice, singular
/// values at or below `rank_tol` times that slice's largest singular value
/// are truncated.
pub fn t_pinv(a: &Tensor3, rank_tol: f64) -> Tensor3 {
    let fa = to_fourier(a);
    let fp = fa.slicewise_pinv(rank_tol);
    from_fourier(&fp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{rand_tensor, rel_err_mat, rel_err_tensor};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Brute-force block assembly straight from the definition.
    fn bcirc_oracle(a: &Tensor3) -> DMatrix<f64> {
        let (m, l, n) = a.shape();
        let mut out = DMatrix::zeros(m * n, l * n);
        for r in 0..m * n {
            for c in 0..l * n {
                let (bi, i) = (r / m, r % m);
                let (bj, j) = (c / l, c % l);
                let s = ((bi as isize - bj as isize).rem_euclid(n as isize)) as usize;
                out[(r, c)] = a.get(i, j, s);
            }
        }
        out
    }

    /// t-product straight from the fold(bcirc * unfold) definition.
    pub(crate) fn t_product_dense(a: &Tensor3, b: &Tensor3) -> Tensor3 {
        fold(&(bcirc(a) * unfold(b)), a.depth()).unwrap()
    }

    #[test]
    fn bcirc_depth_one_is_single_slice() {
        let a = Tensor3::from_values(2, 3, 1, vec![1., 2., 3., 4., 5., 6.]).unwrap();
        assert_eq!(bcirc(&a), a.frontal_slice(0));
    }

    #[test]
    fn bcirc_depth_two_layout() {
        // slices A1, A2 -> [[A1, A2], [A2, A1]]
        let a = Tensor3::from_fn(2, 2, 2, |i, j, s| (s * 4 + j * 2 + i) as f64);
        let b = bcirc(&a);
        let a1 = a.frontal_slice(0);
        let a2 = a.frontal_slice(1);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(b[(i, j)], a1[(i, j)]);
                assert_eq!(b[(i, j + 2)], a2[(i, j)]);
                assert_eq!(b[(i + 2, j)], a2[(i, j)]);
                assert_eq!(b[(i + 2, j + 2)], a1[(i, j)]);
            }
        }
    }

    #[test]
    fn bcirc_matches_index_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = rand_tensor(&mut rng, 2, 2, 3);
        assert_eq!(bcirc(&a), bcirc_oracle(&a));
    }

    #[test]
    fn fold_unfold_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = rand_tensor(&mut rng, 3, 2, 4);
        let back = fold(&unfold(&a), 4).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn unfold_depth_one_is_slice() {
        let a = Tensor3::from_values(2, 2, 1, vec![1., 2., 3., 4.]).unwrap();
        assert_eq!(unfold(&a), a.frontal_slice(0));
    }

    #[test]
    fn unfold_stacks_slices_vertically() {
        let a = Tensor3::from_values(2, 1, 2, vec![1., 2., 3., 4.]).unwrap();
        let u = unfold(&a);
        assert_eq!((u.nrows(), u.ncols()), (4, 1));
        assert_eq!(u[(0, 0)], 1.);
        assert_eq!(u[(1, 0)], 2.);
        assert_eq!(u[(2, 0)], 3.);
        assert_eq!(u[(3, 0)], 4.);
    }

    #[test]
    fn fold_rejects_indivisible_rows() {
        let m = DMatrix::<f64>::zeros(5, 2);
        assert!(fold(&m, 2).is_err());
    }

    #[test]
    fn tv_of_tube_is_the_tube() {
        let a = Tensor3::from_values(1, 1, 3, vec![7., 8., 9.]).unwrap();
        assert_eq!(a.tv(), &[7., 8., 9.]);
    }

    #[test]
    fn tv_inner_matches_triple_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = rand_tensor(&mut rng, 3, 2, 2);
        let b = rand_tensor(&mut rng, 3, 2, 2);
        let dot: f64 = a.tv().iter().zip(b.tv()).map(|(x, y)| x * y).sum();
        let mut triple = 0.0;
        for s in 0..2 {
            for j in 0..2 {
                for i in 0..3 {
                    triple += a.get(i, j, s) * b.get(i, j, s);
                }
            }
        }
        assert_relative_eq!(dot, triple, max_relative = 1e-14);
        assert_relative_eq!(inner(&a, &b).unwrap(), triple, max_relative = 1e-14);
    }

    #[test]
    fn t_product_identity_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = rand_tensor(&mut rng, 3, 4, 3);
        let id = t_identity(4, 3);
        let prod = t_product(&a, &id).unwrap();
        assert!(rel_err_tensor(&prod, &a) < 1e-12);
        let id_left = t_identity(3, 3);
        let prod = t_product(&id_left, &a).unwrap();
        assert!(rel_err_tensor(&prod, &a) < 1e-12);
    }

    #[test]
    fn t_product_depth_one_is_matrix_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = rand_tensor(&mut rng, 2, 3, 1);
        let b = rand_tensor(&mut rng, 3, 2, 1);
        let c = t_product(&a, &b).unwrap();
        let expect = a.frontal_slice(0) * b.frontal_slice(0);
        assert!(rel_err_mat(&c.frontal_slice(0), &expect) < 1e-13);
    }

    #[test]
    fn t_product_matches_dense_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = rand_tensor(&mut rng, 2, 3, 2);
        let b = rand_tensor(&mut rng, 3, 2, 2);
        let fast = t_product(&a, &b).unwrap();
        let dense = t_product_dense(&a, &b);
        assert!(rel_err_tensor(&fast, &dense) < 1e-12);
    }

    #[test]
    fn t_product_rejects_mismatch() {
        let a = Tensor3::zeros(2, 3, 2);
        let b = Tensor3::zeros(2, 2, 2);
        assert!(t_product(&a, &b).is_err());
        let c = Tensor3::zeros(3, 2, 3);
        assert!(t_product(&a, &c).is_err());
    }

    #[test]
    fn transpose_depth_one_and_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = rand_tensor(&mut rng, 2, 3, 1);
        assert_eq!(t_transpose(&a).frontal_slice(0), a.frontal_slice(0).transpose());
        let b = rand_tensor(&mut rng, 2, 3, 4);
        assert_eq!(t_transpose(&t_transpose(&b)), b);
    }

    #[test]
    fn transpose_bcirc_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = rand_tensor(&mut rng, 2, 3, 4);
        let lhs = bcirc(&t_transpose(&a));
        let rhs = bcirc(&a).transpose();
        assert!(rel_err_mat(&lhs, &rhs) < 1e-15);
    }

    #[test]
    fn identity_tensor_properties() {
        let id = t_identity(2, 1);
        assert_eq!(id.frontal_slice(0), DMatrix::identity(2, 2));
        let id3 = t_identity(3, 4);
        let sq = t_product(&id3, &id3).unwrap();
        assert!(rel_err_tensor(&sq, &id3) < 1e-13);
        assert!(rel_err_mat(&bcirc(&id3), &DMatrix::identity(12, 12)) < 1e-15);
    }

    #[test]
    fn inner_product_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = rand_tensor(&mut rng, 3, 2, 2);
        assert!(inner(&a, &a).unwrap() > 0.0);
        let z = Tensor3::zeros(3, 2, 2);
        assert_eq!(inner(&z, &z).unwrap(), 0.0);
        assert_eq!(fro_norm(&t_identity(1, 1)), 1.0);
        assert!(inner(&a, &Tensor3::zeros(2, 2, 2)).is_err());
    }

    #[test]
    fn adjoint_identity() {
        // <A*B, C> = <B, A^T * C>
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let a = rand_tensor(&mut rng, 3, 4, 3);
        let b = rand_tensor(&mut rng, 4, 2, 3);
        let c = rand_tensor(&mut rng, 3, 2, 3);
        let lhs = inner(&t_product(&a, &b).unwrap(), &c).unwrap();
        let rhs = inner(&b, &t_product(&t_transpose(&a), &c).unwrap()).unwrap();
        assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
    }

    #[test]
    fn pinv_identity_and_zero() {
        let id = t_identity(3, 2);
        assert!(rel_err_tensor(&t_pinv(&id, 1e-12), &id) < 1e-12);
        let z = Tensor3::zeros(2, 3, 2);
        assert!(t_pinv(&z, 1e-12).is_zero());
    }

    #[test]
    fn pinv_satisfies_a_adag_a() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = rand_tensor(&mut rng, 4, 3, 2);
        let p = t_pinv(&a, 1e-12);
        let back = t_product(&t_product(&a, &p).unwrap(), &a).unwrap();
        assert!(rel_err_tensor(&back, &a) < 1e-8);
    }

    #[test]
    fn pinv_matches_dense_bcirc_pinv() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a = rand_tensor(&mut rng, 4, 3, 2);
        let p = t_pinv(&a, 1e-12);
        let dense = crate::analysis::pinv_dense(&bcirc(&a), 1e-12);
        assert!(rel_err_mat(&bcirc(&p), &dense) < 1e-8);
    }

    #[test]
    fn from_values_rejects_non_finite() {
        let err = Tensor3::from_values(1, 1, 2, vec![1.0, f64::NAN]);
        assert!(matches!(err, Err(Error::NonFinite { index: 1 })));
    }
}
