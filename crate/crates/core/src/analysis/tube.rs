use crate::numerics::norm;
use crate::solver::Problem;

use super::AnalysisError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TubeCheck {
    pub inside: bool,
    pub distance: f64,
    /// `gamma mu / rho - dist(x; X*)`
    pub margin: f64,
}

/// Membership in `T_gamma = {x : dist(x; X*) < gamma mu / rho}`.
pub fn check_tube<P: Problem + ?Sized>(
    x: &[f64],
    problem: &P,
    gamma: f64,
    mu: f64,
    rho: f64,
) -> Result<TubeCheck, AnalysisError> {
    let distance = problem.distance(x).ok_or(AnalysisError::MissingDistance)?;
    let radius = gamma * mu / rho;
    Ok(TubeCheck {
        inside: distance < radius,
        distance,
        margin: radius - distance,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationarityReport {
    /// Grid points with `0 < dist < 2 mu / rho - spacing`.
    pub checked: usize,
    pub min_subgrad_norm: f64,
    pub argmin: Option<Vec<f64>>,
    pub pass: bool,
}

/// Grid check that no point with `0 < dist(x; X*) < 2 mu / rho - spacing`
/// has a zero subgradient. Violations are reported, not raised.
pub fn verify_no_stationary<P: Problem + ?Sized>(
    problem: &P,
    mu: f64,
    rho: f64,
    grid: &[Vec<f64>],
    spacing: f64,
) -> Result<StationarityReport, AnalysisError> {
    let limit = 2.0 * mu / rho - spacing;
    let mut checked = 0;
    let mut min_norm = f64::INFINITY;
    let mut argmin = None;
    for x in grid {
        let d = problem.distance(x).ok_or(AnalysisError::MissingDistance)?;
        if d > 0.0 && d < limit {
            checked += 1;
            let n = norm(&problem.subgradient(x));
            if n < min_norm {
                min_norm = n;
                argmin = Some(x.clone());
            }
        }
    }
    Ok(StationarityReport {
        checked,
        min_subgrad_norm: min_norm,
        argmin,
        pass: checked > 0 && min_norm > 0.0,
    })
}
