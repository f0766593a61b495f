//! Projected subgradient iterations with Polyak, constant and geometrically
//! decaying step rules, plus the constants that govern their guarantees.

mod problem;
mod solve;
mod steps;

pub use problem::Problem;
pub use solve::{solve, IterRecord, SolveConfig, StopStatus, Trace};
pub use steps::{
    constant_step, constant_step_alpha_max, constant_step_bound, constant_step_threshold,
    contraction_factor, geometric_params, geometric_stepsize, polyak_step, ConstantStepGuarantee,
    Constants, StepSchedule,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("zero subgradient")]
    ZeroSubgradient,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("Polyak schedule needs the optimal value, but none was supplied")]
    MissingMinValue,
    #[error("non-finite {oracle} output at record {iteration}")]
    NonFiniteOracle {
        iteration: usize,
        oracle: &'static str,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}
