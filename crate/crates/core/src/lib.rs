//! Projected subgradient methods for sharp, weakly convex problems.
//!
//! * [`numerics`]: vector/matrix kernels, seeded Gaussian streams, small SVDs.
//! * [`solver`]: the iteration with Polyak, constant and geometric steps.
//! * [`problems`]: phase retrieval, covariance estimation, closed-form
//!   instances and composite `h ∘ c` builders.
//! * [`analysis`]: constant estimation, tube checks, rate fitting and bound
//!   verification.
//! * [`cli`]: the `sharpstep` command-line harness.

pub mod analysis;
pub mod cli;
mod kv;
pub mod numerics;
pub mod problems;
pub mod solver;
