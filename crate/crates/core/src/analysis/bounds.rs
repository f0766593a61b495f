use crate::solver::{
    constant_step, constant_step_threshold, contraction_factor, geometric_params,
    ConstantStepGuarantee, Constants, Problem, StepSchedule, Trace,
};

use super::{AnalysisError, CheckLine};

/// Relative slack applied to every bound check.
pub const BOUND_SLACK: f64 = 1e-9;

pub fn within(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + BOUND_SLACK * rhs.abs()
}

/// One-step bound for a normalized subgradient step of length `alpha` from
/// a point of `T_1`: `(1 + rho alpha / L) E - 2 alpha tau sqrt(E) + alpha²`.
pub fn key_recurrence_rhs(e: f64, alpha: f64, c: &Constants) -> f64 {
    (1.0 + c.rho * alpha / c.lip) * e - 2.0 * alpha * c.tau() * e.sqrt() + alpha * alpha
}

/// Checks the one-step recurrence at every `(x, alpha)` of the grid for which
/// `x ∈ T_1` and `ζ(x) ≠ 0`. Returns `(checked, violations, worst lhs - rhs)`.
pub fn check_key_recurrence<P: Problem + ?Sized>(
    problem: &P,
    c: &Constants,
    xs: &[Vec<f64>],
    alphas: &[f64],
) -> Result<(usize, usize, f64), AnalysisError> {
    let mut checked = 0;
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    let tube = c.tube_radius(1.0);
    for x in xs {
        let d = problem.distance(x).ok_or(AnalysisError::MissingDistance)?;
        if d >= tube {
            continue;
        }
        let zeta = problem.subgradient(x);
        if zeta.iter().all(|v| *v == 0.0) {
            continue;
        }
        for &alpha in alphas {
            let next = constant_step(x, &zeta, alpha, |y| problem.project(y))
                .expect("nonzero subgradient");
            let lhs = problem
                .distance(&next)
                .ok_or(AnalysisError::MissingDistance)?
                .powi(2);
            let rhs = key_recurrence_rhs(d * d, alpha, c);
            checked += 1;
            if !within(lhs, rhs) {
                violations += 1;
            }
            worst = worst.max(lhs - rhs);
        }
    }
    Ok((checked, violations, worst))
}

/// Per-step check of `E_{k+1} - E* <= q_k (E_k - E*)` on a constant-step
/// trace, at every `k` with `x_k ∈ T_1`. Returns `(checked, violations)`.
pub fn check_contraction(
    trace: &Trace,
    alpha: f64,
    c: &Constants,
) -> Result<(usize, usize), AnalysisError> {
    let e_star = constant_step_threshold(alpha, c)?;
    let dists = trace.distances().ok_or(AnalysisError::MissingDistance)?;
    let tube = c.tube_radius(1.0);
    let mut checked = 0;
    let mut violations = 0;
    for w in dists.windows(2) {
        if w[0] >= tube {
            continue;
        }
        let (ek, ek1) = (w[0] * w[0], w[1] * w[1]);
        let rhs = contraction_factor(ek, e_star, alpha, c) * (ek - e_star);
        checked += 1;
        // slack relative to the magnitudes entering the difference
        if ek1 - e_star > rhs + BOUND_SLACK * (ek1 + e_star + ek) {
            violations += 1;
        }
    }
    Ok((checked, violations))
}

/// Whether the constants used for a check are exact or estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantsSource {
    Exact,
    Estimated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub rule: &'static str,
    pub source: ConstantsSource,
    /// Satisfaction per checked index (per step for Polyak, per iterate
    /// otherwise).
    pub satisfied: Vec<bool>,
    /// Largest `lhs / rhs` observed (0 when every rhs is 0 and lhs is 0).
    pub worst_ratio: f64,
}

impl BoundReport {
    pub fn fraction(&self) -> f64 {
        if self.satisfied.is_empty() {
            return 1.0;
        }
        self.satisfied.iter().filter(|s| **s).count() as f64 / self.satisfied.len() as f64
    }

    /// With exact constants the contract is full satisfaction; with estimated
    /// constants the line is informational and always passes.
    pub fn check_line(&self, name: &str) -> CheckLine {
        let pass = match self.source {
            ConstantsSource::Exact => self.satisfied.iter().all(|s| *s),
            ConstantsSource::Estimated => true,
        };
        CheckLine::new(name, pass, self.fraction(), 1.0)
    }
}

/// Checks a trace against the guarantee matching its step rule:
///
/// * Polyak: `dist²(x_{k+1}) <= (1 - (1 - gamma) tau²) dist²(x_k)`;
/// * constant: `E_k - E* <= max{q^k (E_0 - E*), 2 alpha²}`;
/// * geometric: `dist²(x_k) <= (gamma mu / rho)² (1 - (1 - gamma) tau²)^k`.
///
/// With exact constants the hypotheses of the guarantee are enforced and a
/// violated one is an error; with estimated constants they are not.
pub fn verify_trace_bounds(
    trace: &Trace,
    schedule: &StepSchedule,
    c: &Constants,
    gamma: f64,
    source: ConstantsSource,
) -> Result<BoundReport, AnalysisError> {
    let dists = trace.distances().ok_or(AnalysisError::MissingDistance)?;
    let e: Vec<f64> = dists.iter().map(|d| d * d).collect();
    let strict = source == ConstantsSource::Exact;
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(AnalysisError::InvalidArgument(format!(
            "gamma must lie in (0,1), got {gamma}"
        )));
    }
    let radius = c.tube_radius(gamma);
    if strict && dists[0] > radius * (1.0 + BOUND_SLACK) {
        return Err(AnalysisError::Mismatch(format!(
            "start distance {} lies outside T_gamma (radius {radius})",
            dists[0]
        )));
    }

    let mut satisfied = Vec::with_capacity(e.len());
    let mut worst: f64 = 0.0;
    let mut record = |lhs: f64, rhs: f64| {
        satisfied.push(within(lhs, rhs));
        if rhs > 0.0 {
            worst = worst.max(lhs / rhs);
        } else if lhs > 0.0 {
            worst = f64::INFINITY;
        }
    };

    match *schedule {
        StepSchedule::Polyak { .. } => {
            let rate = c.polyak_rate(gamma);
            for w in e.windows(2) {
                record(w[1], rate * w[0]);
            }
        }
        StepSchedule::Geometric { lambda, q } => {
            if strict {
                let (lam_star, q_star) = geometric_params(gamma, c)?;
                if (lambda - lam_star).abs() > 1e-12 * lam_star || (q - q_star).abs() > 1e-12 {
                    return Err(AnalysisError::Mismatch(format!(
                        "geometric schedule (lambda={lambda}, q={q}) differs from the guaranteed \
                         parameters (lambda={lam_star}, q={q_star})"
                    )));
                }
            }
            let rate = c.polyak_rate(gamma);
            for (k, ek) in e.iter().enumerate() {
                record(*ek, radius * radius * rate.powi(k as i32));
            }
        }
        StepSchedule::Constant { alpha } => {
            let g = ConstantStepGuarantee::new(e[0], alpha, gamma, c)
                .map_err(|err| AnalysisError::Mismatch(err.to_string()))?;
            for (k, ek) in e.iter().enumerate() {
                record(ek - g.e_star, g.bound(k));
            }
        }
    }

    Ok(BoundReport {
        rule: schedule.name(),
        source,
        satisfied,
        worst_ratio: worst,
    })
}
