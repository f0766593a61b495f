//! Dense kernels shared by every other module.
//!
//! Vectors are plain `[f64]` slices. [`Matrix`] is row-major throughout the
//! crate, so a `d x r` factor flattened with [`Matrix::as_slice`] is the
//! variable the solver iterates on.

mod finite_diff;
mod linalg;
mod rng;
mod svd;

pub use finite_diff::finite_diff_grad;
pub use linalg::{axpy, dist, dot, norm, norm_sq, scale, sub, Matrix};
pub use rng::{RngStream, NORMAL_TRANSFORM, RNG_ALGORITHM};
pub use svd::{random_orthogonal, singular_values, svd_small};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },
    #[error("non-finite function value {value} at coordinate {coord}")]
    NonFinite { coord: usize, value: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
