//! Run configuration: flat `key = value` text with namespaced keys.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::kv;
use crate::problems::{AnalyticInstance, CovarianceSpec, InstanceSpec, PhaseRetrievalSpec};
use crate::solver::{SolveConfig, StepSchedule};

use super::CliError;

/// Default budget of `solve.max_iters`.
pub const DEFAULT_MAX_ITERS: usize = 500;
/// Default relative offset of the starting point.
pub const DEFAULT_DELTA: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    Polyak,
    Constant,
    Geometric,
}

impl ScheduleKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScheduleKind::Polyak => "polyak",
            ScheduleKind::Constant => "constant",
            ScheduleKind::Geometric => "geometric",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        [Self::Polyak, Self::Constant, Self::Geometric]
            .into_iter()
            .find(|k| k.name() == s)
    }
}

/// Units of `schedule.alpha` and `schedule.lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepScale {
    /// Step lengths are used as given.
    Absolute,
    /// Step lengths are multiplied by the root-mean-square entry of the
    /// ground truth, `‖x̄‖ / sqrt(dim)`.
    Signal,
}

impl StepScale {
    pub fn name(&self) -> &'static str {
        match self {
            StepScale::Absolute => "absolute",
            StepScale::Signal => "signal",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        [Self::Absolute, Self::Signal]
            .into_iter()
            .find(|k| k.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// `phase-retrieval`, `covariance`, `abs`, `l1` or `quad1d`.
    pub kind: String,
    pub d: Option<usize>,
    pub m: Option<usize>,
    pub r: Option<usize>,
    pub corrupted: bool,
    pub p: f64,
    pub s: f64,
    pub seed: u64,

    pub schedule: ScheduleKind,
    pub alpha: Option<f64>,
    pub lambda: Option<f64>,
    pub q: Option<f64>,
    pub scale: StepScale,

    pub delta: f64,
    /// Direction seed of the starting point; `None` reuses `seed`.
    pub init_seed: Option<u64>,

    pub max_iters: usize,
    /// Normalized distance tolerance.
    pub dist_tol: Option<f64>,
    pub obj_tol: Option<f64>,
    pub zero_subgrad: Option<f64>,

    pub output: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            kind: "phase-retrieval".into(),
            d: None,
            m: None,
            r: None,
            corrupted: false,
            p: 0.1,
            s: 10.0,
            seed: 1,
            schedule: ScheduleKind::Polyak,
            alpha: None,
            lambda: None,
            q: None,
            scale: StepScale::Absolute,
            delta: DEFAULT_DELTA,
            init_seed: None,
            max_iters: DEFAULT_MAX_ITERS,
            dist_tol: None,
            obj_tol: None,
            zero_subgrad: None,
            output: None,
        }
    }
}

/// Every accepted key, in serialization order.
pub const KEYS: &[&str] = &[
    "problem.kind",
    "problem.d",
    "problem.m",
    "problem.r",
    "problem.corrupted",
    "problem.p",
    "problem.s",
    "problem.seed",
    "schedule.kind",
    "schedule.alpha",
    "schedule.lambda",
    "schedule.q",
    "schedule.scale",
    "init.delta",
    "init.seed",
    "solve.max_iters",
    "solve.dist_tol",
    "solve.obj_tol",
    "solve.zero_subgrad",
    "output.path",
];

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::Config(format!("`{key}`: cannot parse `{value}`: {e}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(CliError::Config(format!(
            "`{key}`: expected true or false, got `{value}`"
        ))),
    }
}

impl RunConfig {
    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "problem.kind" => {
                if !matches!(value, "phase-retrieval" | "covariance")
                    && AnalyticInstance::from_name(value).is_none()
                {
                    return Err(CliError::Config(format!("unknown problem kind `{value}`")));
                }
                self.kind = value.to_string();
            }
            "problem.d" => self.d = Some(parse_num(key, value)?),
            "problem.m" => self.m = Some(parse_num(key, value)?),
            "problem.r" => self.r = Some(parse_num(key, value)?),
            "problem.corrupted" => self.corrupted = parse_bool(key, value)?,
            "problem.p" => self.p = parse_num(key, value)?,
            "problem.s" => self.s = parse_num(key, value)?,
            "problem.seed" => self.seed = parse_num(key, value)?,
            "schedule.kind" => {
                self.schedule = ScheduleKind::from_name(value)
                    .ok_or_else(|| CliError::Config(format!("unknown schedule `{value}`")))?;
            }
            "schedule.alpha" => self.alpha = Some(parse_num(key, value)?),
            "schedule.lambda" => self.lambda = Some(parse_num(key, value)?),
            "schedule.q" => self.q = Some(parse_num(key, value)?),
            "schedule.scale" => {
                self.scale = StepScale::from_name(value)
                    .ok_or_else(|| CliError::Config(format!("unknown step scale `{value}`")))?;
            }
            "init.delta" => self.delta = parse_num(key, value)?,
            "init.seed" => self.init_seed = Some(parse_num(key, value)?),
            "solve.max_iters" => self.max_iters = parse_num(key, value)?,
            "solve.dist_tol" => self.dist_tol = Some(parse_num(key, value)?),
            "solve.obj_tol" => self.obj_tol = Some(parse_num(key, value)?),
            "solve.zero_subgrad" => self.zero_subgrad = Some(parse_num(key, value)?),
            "output.path" => self.output = Some(value.to_string()),
            _ => return Err(CliError::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Applies a `key=value` override.
    pub fn set_pair(&mut self, pair: &str) -> Result<(), CliError> {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("expected key=value, got `{pair}`")))?;
        self.set(k.trim(), v.trim())
    }

    /// Parses a config file on top of the defaults. Unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        let pairs = kv::parse(text).map_err(|e| CliError::Config(e.to_string()))?;
        for (line, key, value) in pairs {
            cfg.set(&key, &value)
                .map_err(|e| CliError::Config(format!("line {line}: {e}")))?;
        }
        Ok(cfg)
    }

    /// Serializes every set field; `parse(to_text())` restores `self`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        line("problem.kind", self.kind.clone());
        if let Some(d) = self.d {
            line("problem.d", d.to_string());
        }
        if let Some(m) = self.m {
            line("problem.m", m.to_string());
        }
        if let Some(r) = self.r {
            line("problem.r", r.to_string());
        }
        line("problem.corrupted", self.corrupted.to_string());
        line("problem.p", self.p.to_string());
        line("problem.s", self.s.to_string());
        line("problem.seed", self.seed.to_string());
        line("schedule.kind", self.schedule.name().into());
        if let Some(a) = self.alpha {
            line("schedule.alpha", a.to_string());
        }
        if let Some(l) = self.lambda {
            line("schedule.lambda", l.to_string());
        }
        if let Some(q) = self.q {
            line("schedule.q", q.to_string());
        }
        line("schedule.scale", self.scale.name().into());
        line("init.delta", self.delta.to_string());
        if let Some(s) = self.init_seed {
            line("init.seed", s.to_string());
        }
        line("solve.max_iters", self.max_iters.to_string());
        if let Some(t) = self.dist_tol {
            line("solve.dist_tol", t.to_string());
        }
        if let Some(t) = self.obj_tol {
            line("solve.obj_tol", t.to_string());
        }
        if let Some(t) = self.zero_subgrad {
            line("solve.zero_subgrad", t.to_string());
        }
        if let Some(p) = &self.output {
            line("output.path", p.clone());
        }
        out
    }

    /// Resolves the problem keys, filling desk-scale defaults: phase
    /// retrieval `d = 100, m = 8d`; covariance `d = 50, r = 3, m = 10 d r`.
    pub fn instance_spec(&self) -> Result<InstanceSpec, CliError> {
        let spec = match self.kind.as_str() {
            "phase-retrieval" => {
                if self.r.is_some() {
                    return Err(CliError::Config(
                        "`problem.r` does not apply to phase-retrieval".into(),
                    ));
                }
                let d = self.d.unwrap_or(100);
                let s = PhaseRetrievalSpec {
                    d,
                    m: self.m.unwrap_or(8 * d),
                    corrupted: self.corrupted,
                    p: self.p,
                    s: self.s,
                    seed: self.seed,
                };
                s.validate()?;
                InstanceSpec::PhaseRetrieval(s)
            }
            "covariance" => {
                let d = self.d.unwrap_or(50);
                let r = self.r.unwrap_or(3);
                let s = CovarianceSpec {
                    d,
                    r,
                    m: self.m.unwrap_or(10 * d * r),
                    corrupted: self.corrupted,
                    p: self.p,
                    s: self.s,
                    seed: self.seed,
                };
                s.validate()?;
                InstanceSpec::Covariance(s)
            }
            name => {
                let a = AnalyticInstance::from_name(name)
                    .ok_or_else(|| CliError::Config(format!("unknown problem kind `{name}`")))?;
                if self.d.is_some() || self.m.is_some() || self.r.is_some() || self.corrupted {
                    return Err(CliError::Config(format!(
                        "`{name}` takes no dimension or corruption keys"
                    )));
                }
                InstanceSpec::Analytic(a)
            }
        };
        Ok(spec)
    }

    /// Step schedule with step lengths multiplied by `unit`.
    pub fn step_schedule(&self, unit: f64) -> Result<StepSchedule, CliError> {
        let need = |v: Option<f64>, key: &str| {
            v.ok_or_else(|| {
                CliError::Config(format!("schedule `{}` needs `{key}`", self.schedule.name()))
            })
        };
        let sched = match self.schedule {
            ScheduleKind::Polyak => StepSchedule::Polyak { min_value: None },
            ScheduleKind::Constant => StepSchedule::Constant {
                alpha: need(self.alpha, "schedule.alpha")? * unit,
            },
            ScheduleKind::Geometric => StepSchedule::Geometric {
                lambda: need(self.lambda, "schedule.lambda")? * unit,
                q: need(self.q, "schedule.q")?,
            },
        };
        sched.validate()?;
        Ok(sched)
    }

    /// Solver settings with the distance tolerance rescaled from normalized
    /// to absolute units.
    pub fn solve_config(&self, distance_scale: f64) -> Result<SolveConfig, CliError> {
        let cfg = SolveConfig {
            max_iters: self.max_iters,
            dist_tol: self.dist_tol.map(|t| t * distance_scale),
            obj_tol: self.obj_tol,
            zero_subgrad_tol: self.zero_subgrad,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.instance_spec()?;
        self.step_schedule(1.0)?;
        self.solve_config(1.0)?;
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(CliError::Config(format!(
                "`init.delta` must lie in (0,1), got {}",
                self.delta
            )));
        }
        Ok(())
    }
}
