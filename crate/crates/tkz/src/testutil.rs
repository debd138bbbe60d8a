//! Shared helpers for unit tests.

use crate::tensor::{fro_norm, Tensor3};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn rand_tensor(rng: &mut impl Rng, rows: usize, cols: usize, depth: usize) -> Tensor3 {
    Tensor3::from_fn(rows, cols, depth, |_, _, _| rng.sample(StandardNormal))
}

pub fn rel_err_tensor(a: &Tensor3, b: &Tensor3) -> f64 {
    let diff = a - b;
    let scale = fro_norm(a).max(fro_norm(b));
    if scale == 0.0 {
        0.0
    } else {
        fro_norm(&diff) / scale
    }
}

pub fn rel_err_mat(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}
