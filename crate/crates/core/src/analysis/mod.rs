//! Empirical constants, tube checks, rate fitting and numerical verification
//! of the convergence guarantees.

mod bounds;
mod estimate;
mod rate;
mod report;
mod sampling;
mod tube;

pub use bounds::{
    check_contraction, check_key_recurrence, key_recurrence_rhs, verify_trace_bounds, within,
    BoundReport, ConstantsSource, BOUND_SLACK,
};
pub use estimate::{
    estimate_from_samples, estimate_l, estimate_params, estimate_sharpness,
    estimate_weak_convexity, reference_value, ParamEstimates,
};
pub use rate::{fit_linear_rate, fit_rate_series, RateFit, Window};
pub use report::{CheckLine, Report};
pub use sampling::{grid_1d, grid_2d, pairs_with_gap, Sampler};
pub use tube::{check_tube, verify_no_stationary, StationarityReport, TubeCheck};

use thiserror::Error;

use crate::solver::SolveError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("instance has no distance oracle")]
    MissingDistance,
    #[error("instance exposes no solution set to sample around")]
    MissingSolutionSet,
    #[error("no valid samples: {0}")]
    NoValidSamples(&'static str),
    #[error("schedule/bound mismatch: {0}")]
    Mismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
}
