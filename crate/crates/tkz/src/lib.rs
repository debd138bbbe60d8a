//! Tensor Kaczmarz solvers with Gearhart-Koshy acceleration under the
//! t-product.

pub mod analysis;
pub mod error;
pub mod harness;
pub mod verify;
pub mod problems;
pub mod sampling;
pub mod solvers;
pub mod tensor;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use tensor::Tensor3;
