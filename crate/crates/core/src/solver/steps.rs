//! Step rules and the closed-form constants attached to them.

use crate::numerics::{axpy, norm_sq};

use super::SolveError;

/// Problem constants: sharpness `mu`, weak convexity `rho` and the
/// subgradient bound `lip` on the tube `T_1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub mu: f64,
    pub rho: f64,
    pub lip: f64,
}

impl Constants {
    pub fn new(mu: f64, rho: f64, lip: f64) -> Result<Self, SolveError> {
        for (name, v) in [("mu", mu), ("rho", rho), ("L", lip)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(SolveError::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self { mu, rho, lip })
    }

    /// Condition measure `tau = mu / L`.
    pub fn tau(&self) -> f64 {
        self.mu / self.lip
    }

    /// Radius of the tube `T_gamma`: `gamma * mu / rho`.
    pub fn tube_radius(&self, gamma: f64) -> f64 {
        gamma * self.mu / self.rho
    }

    /// Polyak contraction factor for `dist²`: `1 - (1 - gamma) tau²`.
    pub fn polyak_rate(&self, gamma: f64) -> f64 {
        1.0 - (1.0 - gamma) * self.tau().powi(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSchedule {
    /// Polyak step; `min_value: None` takes the value from the instance.
    Polyak {
        min_value: Option<f64>,
    },
    Constant {
        alpha: f64,
    },
    Geometric {
        lambda: f64,
        q: f64,
    },
}

impl StepSchedule {
    pub fn validate(&self) -> Result<(), SolveError> {
        match *self {
            StepSchedule::Polyak { min_value } => {
                if let Some(m) = min_value {
                    if !m.is_finite() {
                        return Err(SolveError::InvalidParameter(format!(
                            "Polyak min_value must be finite, got {m}"
                        )));
                    }
                }
            }
            StepSchedule::Constant { alpha } => {
                if !(alpha > 0.0 && alpha.is_finite()) {
                    return Err(SolveError::InvalidParameter(format!(
                        "constant stepsize must be positive, got {alpha}"
                    )));
                }
            }
            StepSchedule::Geometric { lambda, q } => {
                if !(lambda > 0.0 && lambda.is_finite()) {
                    return Err(SolveError::InvalidParameter(format!(
                        "geometric scale lambda must be positive, got {lambda}"
                    )));
                }
                if !(q > 0.0 && q < 1.0) {
                    return Err(SolveError::InvalidParameter(format!(
                        "geometric ratio q must lie in (0,1), got {q}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            StepSchedule::Polyak { .. } => "polyak",
            StepSchedule::Constant { .. } => "constant",
            StepSchedule::Geometric { .. } => "geometric",
        }
    }
}

fn nonzero_norm_sq(zeta: &[f64]) -> Result<f64, SolveError> {
    let n2 = norm_sq(zeta);
    if n2 > 0.0 {
        Ok(n2)
    } else {
        Err(SolveError::ZeroSubgradient)
    }
}

/// `proj_X(x - ((g(x) - min g) / ‖ζ‖²) ζ)`.
///
/// A negative gap (mis-declared minimum) is clamped to a zero step.
pub fn polyak_step<P>(
    x: &[f64],
    gx: f64,
    min_value: f64,
    zeta: &[f64],
    project: P,
) -> Result<Vec<f64>, SolveError>
where
    P: Fn(&[f64]) -> Vec<f64>,
{
    let n2 = nonzero_norm_sq(zeta)?;
    let t = (gx - min_value).max(0.0) / n2;
    let mut y = x.to_vec();
    axpy(-t, zeta, &mut y);
    Ok(project(&y))
}

/// `proj_X(x - alpha ζ / ‖ζ‖)`.
pub fn constant_step<P>(
    x: &[f64],
    zeta: &[f64],
    alpha: f64,
    project: P,
) -> Result<Vec<f64>, SolveError>
where
    P: Fn(&[f64]) -> Vec<f64>,
{
    let n = nonzero_norm_sq(zeta)?.sqrt();
    let mut y = x.to_vec();
    axpy(-alpha / n, zeta, &mut y);
    Ok(project(&y))
}

/// `alpha_k = lambda q^k`.
pub fn geometric_stepsize(k: usize, lambda: f64, q: f64) -> f64 {
    lambda * q.powi(k.min(i32::MAX as usize) as i32)
}

/// Scale and ratio that guarantee the geometric-step rate:
/// `lambda = gamma mu² / (rho L)` and `q = sqrt(1 - (1 - gamma) tau²)`.
///
/// Requires `tau <= sqrt(1 / (2 - gamma))`.
pub fn geometric_params(gamma: f64, c: &Constants) -> Result<(f64, f64), SolveError> {
    check_gamma(gamma)?;
    let tau = c.tau();
    let tau_max = (1.0 / (2.0 - gamma)).sqrt();
    if tau > tau_max {
        return Err(SolveError::HypothesisViolated(format!(
            "geometric step needs tau <= sqrt(1/(2-gamma)) = {tau_max:.6}, got tau = {tau:.6}"
        )));
    }
    let lambda = gamma * c.mu * c.mu / (c.rho * c.lip);
    let q = (1.0 - (1.0 - gamma) * tau * tau).sqrt();
    Ok((lambda, q))
}

/// Plateau level `E* = (alpha L / (mu + sqrt(mu² - alpha rho L)))²` of the
/// constant-step method, for `alpha ∈ (0, tau mu / rho)`.
pub fn constant_step_threshold(alpha: f64, c: &Constants) -> Result<f64, SolveError> {
    let alpha_max = c.tau() * c.mu / c.rho;
    if !(alpha > 0.0 && alpha < alpha_max) {
        return Err(SolveError::HypothesisViolated(format!(
            "stepsize must lie in (0, tau*mu/rho) = (0, {alpha_max:.6}), got {alpha}"
        )));
    }
    let disc = c.mu * c.mu - alpha * c.rho * c.lip;
    let e = alpha * c.lip / (c.mu + disc.sqrt());
    Ok(e * e)
}

/// Per-iterate contraction factor
/// `q_k = 1 + (alpha / L)(rho - 2 mu / (sqrt(E_k) + sqrt(E*)))`.
pub fn contraction_factor(e_k: f64, e_star: f64, alpha: f64, c: &Constants) -> f64 {
    1.0 + (alpha / c.lip) * (c.rho - 2.0 * c.mu / (e_k.sqrt() + e_star.sqrt()))
}

/// Largest stepsize admitted by the constant-step convergence guarantee:
/// `gamma tau / sqrt(1 + 2 tau²) * mu / rho`.
pub fn constant_step_alpha_max(gamma: f64, c: &Constants) -> f64 {
    let tau = c.tau();
    gamma * tau / (1.0 + 2.0 * tau * tau).sqrt() * c.mu / c.rho
}

/// Constants of the constant-step guarantee
/// `E_k - E* <= max{q^k (E_0 - E*), 2 alpha²}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantStepGuarantee {
    pub e0: f64,
    pub alpha: f64,
    pub e_star: f64,
    /// `D = sqrt(max{E_0, 2 alpha² + E*})`
    pub d: f64,
    /// `q = 1 + (alpha / L)(rho - mu / D)`
    pub q: f64,
}

impl ConstantStepGuarantee {
    pub fn new(e0: f64, alpha: f64, gamma: f64, c: &Constants) -> Result<Self, SolveError> {
        check_gamma(gamma)?;
        let alpha_max = constant_step_alpha_max(gamma, c);
        if !(alpha > 0.0 && alpha < alpha_max) {
            return Err(SolveError::HypothesisViolated(format!(
                "stepsize must lie in (0, gamma*tau/sqrt(1+2tau^2)*mu/rho) = (0, {alpha_max:.6}), got {alpha}"
            )));
        }
        let radius = c.tube_radius(gamma);
        if !(e0 >= 0.0 && e0 <= radius * radius) {
            return Err(SolveError::HypothesisViolated(format!(
                "initial squared distance {e0} exceeds (gamma*mu/rho)^2 = {}",
                radius * radius
            )));
        }
        let e_star = constant_step_threshold(alpha, c)?;
        let d = e0.max(2.0 * alpha * alpha + e_star).sqrt();
        let q = 1.0 + (alpha / c.lip) * (c.rho - c.mu / d);
        Ok(Self {
            e0,
            alpha,
            e_star,
            d,
            q,
        })
    }

    /// Bound on `E_k - E*`.
    pub fn bound(&self, k: usize) -> f64 {
        let geometric = self.q.powi(k.min(i32::MAX as usize) as i32) * (self.e0 - self.e_star);
        geometric.max(2.0 * self.alpha * self.alpha)
    }
}

/// Returns `(bound on E_k - E*, D, q)`.
pub fn constant_step_bound(
    e0: f64,
    alpha: f64,
    gamma: f64,
    c: &Constants,
    k: usize,
) -> Result<(f64, f64, f64), SolveError> {
    let g = ConstantStepGuarantee::new(e0, alpha, gamma, c)?;
    Ok((g.bound(k), g.d, g.q))
}

fn check_gamma(gamma: f64) -> Result<(), SolveError> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(SolveError::InvalidParameter(format!(
            "tube fraction gamma must lie in (0,1), got {gamma}"
        )))
    }
}
