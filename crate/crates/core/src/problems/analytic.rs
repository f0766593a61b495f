use crate::numerics::{norm, RngStream};
use crate::solver::{Constants, Problem};

use super::sign;

/// Closed-form instances whose constants are known exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalyticInstance {
    /// `|x|` on R; `X* = {0}`.
    Abs,
    /// `‖x‖₁` on R²; `X* = {0}`.
    L1,
    /// `|x² - 1|` on R; `X* = {-1, 1}`.
    Quad1d,
}

impl AnalyticInstance {
    pub const ALL: [AnalyticInstance; 3] = [Self::Abs, Self::L1, Self::Quad1d];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Abs => "abs",
            Self::L1 => "l1",
            Self::Quad1d => "quad1d",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.name() == name)
    }

    /// Exact `(mu, rho, L)`. The convex instances declare `rho = 1`.
    pub fn constants(&self) -> Constants {
        match self {
            Self::Abs => Constants {
                mu: 1.0,
                rho: 1.0,
                lip: 1.0,
            },
            Self::L1 => Constants {
                mu: 1.0,
                rho: 1.0,
                lip: std::f64::consts::SQRT_2,
            },
            Self::Quad1d => Constants {
                mu: 1.0,
                rho: 2.0,
                lip: 3.0,
            },
        }
    }

    /// The (finite) solution set.
    pub fn solutions(&self) -> Vec<Vec<f64>> {
        match self {
            Self::Abs => vec![vec![0.0]],
            Self::L1 => vec![vec![0.0, 0.0]],
            Self::Quad1d => vec![vec![-1.0], vec![1.0]],
        }
    }
}

impl Problem for AnalyticInstance {
    fn dim(&self) -> usize {
        match self {
            Self::L1 => 2,
            _ => 1,
        }
    }

    fn value(&self, x: &[f64]) -> f64 {
        match self {
            Self::Abs => x[0].abs(),
            Self::L1 => x[0].abs() + x[1].abs(),
            Self::Quad1d => (x[0] * x[0] - 1.0).abs(),
        }
    }

    fn subgradient(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Self::Abs => vec![sign(x[0])],
            Self::L1 => vec![sign(x[0]), sign(x[1])],
            Self::Quad1d => vec![sign(x[0] * x[0] - 1.0) * 2.0 * x[0]],
        }
    }

    fn min_value(&self) -> Option<f64> {
        Some(0.0)
    }

    fn distance(&self, x: &[f64]) -> Option<f64> {
        Some(match self {
            Self::Abs => x[0].abs(),
            Self::L1 => norm(x),
            Self::Quad1d => (x[0] - 1.0).abs().min((x[0] + 1.0).abs()),
        })
    }

    fn solution_point(&self, rng: &mut RngStream) -> Option<Vec<f64>> {
        let sols = self.solutions();
        let pick = if sols.len() > 1 && rng.uniform() < 0.5 {
            1
        } else {
            0
        };
        Some(sols[pick].clone())
    }

    fn declared_rho(&self) -> Option<f64> {
        Some(self.constants().rho)
    }
}
