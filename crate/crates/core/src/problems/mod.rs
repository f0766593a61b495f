//! Problem generators: robust phase retrieval, covariance estimation,
//! closed-form test instances and a generic `h ∘ c` composite builder.

mod analytic;
mod composite;
mod covariance;
pub mod instance;
mod phase_retrieval;

pub use analytic::AnalyticInstance;
pub use composite::{make_composite, Composite, ConvexOracle, SmoothMap};
pub use covariance::{procrustes_distance, CovarianceEstimation, CovarianceSpec};
pub use instance::{Instance, InstanceSpec, INSTANCE_MAGIC};
pub use phase_retrieval::{pr_distance, PhaseRetrieval, PhaseRetrievalSpec};

use crate::numerics::{NumericsError, RngStream};
use crate::solver::Problem;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("instance file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `sign` with `sign(0) = 0`.
pub fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<(), ProblemError> {
    if expected == got {
        Ok(())
    } else {
        Err(ProblemError::DimensionMismatch { expected, got })
    }
}

/// Feasible sets with closed-form projections.
#[derive(Debug, Clone, PartialEq)]
pub enum FeasibleSet {
    /// The nonnegative orthant.
    Nonnegative,
    /// Coordinatewise `[lower, upper]`.
    Box { lower: f64, upper: f64 },
    /// Euclidean ball.
    Ball { center: Vec<f64>, radius: f64 },
}

impl FeasibleSet {
    pub fn project(&self, y: &[f64]) -> Vec<f64> {
        match self {
            FeasibleSet::Nonnegative => y.iter().map(|v| v.max(0.0)).collect(),
            FeasibleSet::Box { lower, upper } => {
                y.iter().map(|v| v.clamp(*lower, *upper)).collect()
            }
            FeasibleSet::Ball { center, radius } => {
                let d = crate::numerics::dist(y, center);
                if d <= *radius {
                    y.to_vec()
                } else {
                    let t = radius / d;
                    y.iter().zip(center).map(|(v, c)| c + t * (v - c)).collect()
                }
            }
        }
    }
}

/// Restricts an instance to a feasible set that contains its solution set.
pub struct Constrained<P> {
    pub inner: P,
    pub set: FeasibleSet,
}

impl<P: Problem> Problem for Constrained<P> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.inner.value(x)
    }
    fn subgradient(&self, x: &[f64]) -> Vec<f64> {
        self.inner.subgradient(x)
    }
    fn project(&self, y: &[f64]) -> Vec<f64> {
        self.set.project(&self.inner.project(y))
    }
    fn min_value(&self) -> Option<f64> {
        self.inner.min_value()
    }
    fn distance(&self, x: &[f64]) -> Option<f64> {
        self.inner.distance(x)
    }
    fn solution_point(&self, rng: &mut RngStream) -> Option<Vec<f64>> {
        self.inner.solution_point(rng)
    }
    fn declared_rho(&self) -> Option<f64> {
        self.inner.declared_rho()
    }
    fn distance_scale(&self) -> f64 {
        self.inner.distance_scale()
    }
}
