use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::analysis::{estimate_params, fit_rate_series, ParamEstimates, Sampler, Window};
use crate::numerics::{axpy, RngStream};
use crate::problems::{instance, Instance, InstanceSpec};
use crate::solver::{solve, Problem, StepSchedule, Trace};

use super::config::{RunConfig, StepScale, KEYS};
use super::output::{meta_path, meta_text, summary_csv, trace_csv, write_atomic, SummaryRow};
use super::CliError;

/// Stream id of the starting-point direction.
pub const INIT_STREAM: u64 = 100;

/// Starting point `x̄ + delta ‖x̄‖ u` with `u` uniform on the sphere; for the
/// closed-form instances the offset is `delta mu / rho` from a solution.
pub fn start_point(inst: &Instance, delta: f64, seed: u64) -> Result<Vec<f64>, CliError> {
    let mut rng = RngStream::new(seed, INIT_STREAM);
    let (center, radius) = match inst {
        Instance::Analytic(a) => {
            let c = a.constants();
            let center = a
                .solutions()
                .pop()
                .expect("closed-form instances have solutions");
            (center, delta * c.mu / c.rho)
        }
        _ => {
            let center = inst
                .ground_truth()
                .ok_or_else(|| CliError::Config("instance has no ground truth".into()))?;
            (center, delta * inst.distance_scale())
        }
    };
    let u = rng.unit_sphere(inst.dim());
    let mut x = center;
    axpy(radius, &u, &mut x);
    Ok(x)
}

/// Multiplier applied to configured step lengths.
pub fn step_unit(inst: &Instance, scale: StepScale) -> Result<f64, CliError> {
    match (scale, inst) {
        (StepScale::Absolute, _) => Ok(1.0),
        (StepScale::Signal, Instance::Analytic(a)) => Err(CliError::Config(format!(
            "`schedule.scale = signal` needs a ground-truth signal; `{}` has none",
            a.name()
        ))),
        (StepScale::Signal, _) => Ok(inst.distance_scale() / (inst.dim() as f64).sqrt()),
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub trace: Trace,
    pub scale: f64,
    pub csv: String,
    pub meta: String,
}

impl RunOutcome {
    pub fn normalized_distances(&self) -> Option<Vec<f64>> {
        self.trace
            .distances()
            .map(|d| d.into_iter().map(|v| v / self.scale).collect())
    }
}

/// Builds the instance, starting point and schedule of `cfg` and solves.
pub fn execute(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    cfg.validate()?;
    let inst = cfg.instance_spec()?.build()?;
    let schedule = match cfg.step_schedule(step_unit(&inst, cfg.scale)?)? {
        StepSchedule::Polyak { .. } => StepSchedule::Polyak {
            min_value: Some(inst.min_value().ok_or_else(|| {
                CliError::Config(
                    "the Polyak schedule needs a known optimal value (use an exact set-up)".into(),
                )
            })?),
        },
        other => other,
    };
    let scale = inst.distance_scale();
    let x0 = start_point(&inst, cfg.delta, cfg.init_seed.unwrap_or(cfg.seed))?;
    let trace = solve(&inst, &schedule, &x0, &cfg.solve_config(scale)?)?;
    let csv = trace_csv(&trace, scale);
    let meta = meta_text(&cfg.to_text(), &trace, scale);
    Ok(RunOutcome {
        trace,
        scale,
        csv,
        meta,
    })
}

pub fn write_outcome(path: &Path, out: &RunOutcome) -> Result<(), CliError> {
    write_atomic(path, &out.csv)?;
    write_atomic(&meta_path(path), &out.meta)
}

pub fn cmd_gen(cfg: &RunConfig, out: &Path) -> Result<String, CliError> {
    let spec = cfg.instance_spec()?;
    let inst = spec.build()?;
    write_atomic(out, &instance::to_text(&spec, &inst))?;
    Ok(inst.summary())
}

pub fn load_instance(path: &Path) -> Result<(InstanceSpec, Instance), CliError> {
    Ok(instance::load(path)?)
}

pub fn cmd_estimate(
    inst: &Instance,
    samples: usize,
    radius: Option<f64>,
    seed: u64,
) -> Result<ParamEstimates, CliError> {
    if inst.ground_truth().is_none() {
        return Err(CliError::Config(
            "estimation needs an instance with ground truth".into(),
        ));
    }
    let radius = radius.unwrap_or_else(|| inst.distance_scale());
    if !(radius > 0.0 && radius.is_finite()) || samples == 0 {
        return Err(CliError::Config(format!(
            "sampler needs a positive radius and count, got radius={radius} samples={samples}"
        )));
    }
    estimate_params(inst, &Sampler::new(radius, samples, seed))
        .map_err(|e| CliError::Config(e.to_string()))
}

fn sanitize(value: &str) -> String {
    value
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '.' || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// Fitted per-iteration contraction of the normalized `dist²`.
pub fn fitted_q(out: &RunOutcome) -> Option<f64> {
    let d = out.normalized_distances()?;
    let sq: Vec<f64> = d.iter().map(|v| v * v).collect();
    fit_rate_series(&sq, Window::default()).ok().map(|f| f.q)
}

/// One run per axis value, in parallel; rows keep the axis order.
pub fn cmd_sweep(
    template: &RunConfig,
    axis: &str,
    values: &[String],
    dir: &Path,
) -> Result<Vec<SummaryRow>, CliError> {
    if !KEYS.contains(&axis) {
        return Err(CliError::Config(format!("unknown sweep axis `{axis}`")));
    }
    fs::create_dir_all(dir)?;
    let stem = sanitize(axis);
    let rows: Vec<SummaryRow> = values
        .par_iter()
        .map(|value| {
            let path: PathBuf = dir.join(format!("{stem}_{}.csv", sanitize(value)));
            let result = (|| {
                let mut cfg = template.clone();
                cfg.set(axis, value)?;
                let out = execute(&cfg)?;
                write_outcome(&path, &out)?;
                Ok::<_, CliError>(out)
            })();
            match result {
                Ok(out) => SummaryRow {
                    axis_value: value.clone(),
                    status: out.trace.status.as_str().to_string(),
                    final_distance: out.trace.final_distance().map(|d| d / out.scale),
                    fitted_q: fitted_q(&out),
                    iters: Some(out.trace.iterations()),
                },
                Err(e) => SummaryRow {
                    axis_value: value.clone(),
                    status: e.status_label().to_string(),
                    final_distance: None,
                    fitted_q: None,
                    iters: None,
                },
            }
        })
        .collect();
    write_atomic(&dir.join("summary.csv"), &summary_csv(&rows))?;
    Ok(rows)
}
