use crate::numerics::norm;

use super::steps::{constant_step, geometric_stepsize, polyak_step, StepSchedule};
use super::{Problem, SolveError};

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub max_iters: usize,
    /// Stop once `dist(x_k; X*) <= dist_tol` (needs a distance oracle).
    pub dist_tol: Option<f64>,
    /// Stop once `g(x_k) - min g <= obj_tol`. Only the Polyak schedule knows
    /// `min g`, so the check is inactive for the other rules.
    pub obj_tol: Option<f64>,
    /// Zero-subgradient threshold `eps0`; `None` uses
    /// `1e-14 * max(1, ‖ζ_0‖)`.
    pub zero_subgrad_tol: Option<f64>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            max_iters: 1000,
            dist_tol: None,
            obj_tol: None,
            zero_subgrad_tol: None,
        }
    }
}

impl SolveConfig {
    pub fn with_max_iters(max_iters: usize) -> Self {
        Self {
            max_iters,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        if self.max_iters == 0 {
            return Err(SolveError::InvalidParameter(
                "max_iters must be >= 1".into(),
            ));
        }
        for (name, v) in [
            ("dist_tol", self.dist_tol),
            ("obj_tol", self.obj_tol),
            ("zero_subgrad_tol", self.zero_subgrad_tol),
        ] {
            if let Some(v) = v {
                #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
                if !(v >= 0.0) {
                    return Err(SolveError::InvalidParameter(format!(
                        "{name} must be nonnegative, got {v}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Scalars recorded at iterate `x_k`.
///
/// `step_size` is the length `alpha_k` of the unnormalized move
/// `x_k - alpha_k ζ_k / ‖ζ_k‖` taken from this iterate (for Polyak,
/// `(g(x_k) - min g) / ‖ζ_k‖`); it is 0 on the final record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterRecord {
    pub iter: usize,
    pub objective: f64,
    pub distance: Option<f64>,
    pub step_size: f64,
    pub subgrad_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopStatus {
    MaxIters,
    ZeroSubgradient,
    ToleranceMet,
}

impl StopStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopStatus::MaxIters => "max-iters",
            StopStatus::ZeroSubgradient => "zero-subgradient-exit",
            StopStatus::ToleranceMet => "tolerance-met",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub records: Vec<IterRecord>,
    pub status: StopStatus,
    pub final_point: Vec<f64>,
    /// Polyak steps whose gap `g(x_k) - min g` was negative and got clamped.
    pub clamped_steps: usize,
}

impl Trace {
    /// `dist(x_k; X*)` for every record, if the distance column is present.
    pub fn distances(&self) -> Option<Vec<f64>> {
        self.records.iter().map(|r| r.distance).collect()
    }

    pub fn final_distance(&self) -> Option<f64> {
        self.records.last().and_then(|r| r.distance)
    }

    pub fn iterations(&self) -> usize {
        self.records.len().saturating_sub(1)
    }
}

fn finite_or(iteration: usize, oracle: &'static str, v: f64) -> Result<f64, SolveError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SolveError::NonFiniteOracle { iteration, oracle })
    }
}

/// Projected subgradient method with the given step rule.
///
/// `x0` is projected onto the feasible set before the first iteration.
pub fn solve<P: Problem + ?Sized>(
    problem: &P,
    schedule: &StepSchedule,
    x0: &[f64],
    cfg: &SolveConfig,
) -> Result<Trace, SolveError> {
    schedule.validate()?;
    cfg.validate()?;
    if x0.len() != problem.dim() {
        return Err(SolveError::DimensionMismatch {
            expected: problem.dim(),
            got: x0.len(),
        });
    }
    let polyak_min = match schedule {
        StepSchedule::Polyak { min_value } => Some(
            min_value
                .or_else(|| problem.min_value())
                .ok_or(SolveError::MissingMinValue)?,
        ),
        _ => None,
    };

    let project = |y: &[f64]| problem.project(y);
    let mut x = project(x0);
    let mut eps0 = cfg.zero_subgrad_tol;
    let mut records = Vec::with_capacity(cfg.max_iters.min(1 << 16) + 1);
    let mut clamped_steps = 0;

    for k in 0..=cfg.max_iters {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(SolveError::NonFiniteOracle {
                iteration: k,
                oracle: "project",
            });
        }
        let gx = finite_or(k, "value", problem.value(&x))?;
        let zeta = problem.subgradient(&x);
        let zeta_norm = finite_or(k, "subgradient", norm(&zeta))?;
        let distance = match problem.distance(&x) {
            Some(d) if d.is_finite() && d >= 0.0 => Some(d),
            Some(_) => {
                return Err(SolveError::NonFiniteOracle {
                    iteration: k,
                    oracle: "distance",
                })
            }
            None => None,
        };
        let eps = *eps0.get_or_insert(1e-14 * zeta_norm.max(1.0));

        let mut record = IterRecord {
            iter: k,
            objective: gx,
            distance,
            step_size: 0.0,
            subgrad_norm: zeta_norm,
        };

        let dist_met = matches!((cfg.dist_tol, distance), (Some(t), Some(d)) if d <= t);
        let obj_met = matches!((cfg.obj_tol, polyak_min), (Some(t), Some(m)) if gx - m <= t);
        let status = if dist_met || obj_met {
            Some(StopStatus::ToleranceMet)
        } else if zeta_norm <= eps {
            Some(StopStatus::ZeroSubgradient)
        } else if k == cfg.max_iters {
            Some(StopStatus::MaxIters)
        } else {
            None
        };
        if let Some(status) = status {
            records.push(record);
            return Ok(Trace {
                records,
                status,
                final_point: x,
                clamped_steps,
            });
        }

        let next = match *schedule {
            StepSchedule::Polyak { .. } => {
                let min = polyak_min.expect("resolved above");
                if gx < min {
                    clamped_steps += 1;
                }
                record.step_size = (gx - min).max(0.0) / zeta_norm;
                polyak_step(&x, gx, min, &zeta, project)?
            }
            StepSchedule::Constant { alpha } => {
                record.step_size = alpha;
                constant_step(&x, &zeta, alpha, project)?
            }
            StepSchedule::Geometric { lambda, q } => {
                let alpha = geometric_stepsize(k, lambda, q);
                record.step_size = alpha;
                constant_step(&x, &zeta, alpha, project)?
            }
        };
        records.push(record);
        x = next;
    }
    unreachable!("loop returns at k == max_iters")
}
