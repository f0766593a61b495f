//! Instance files.
//!
//! A UTF-8 text container: the magic line `SHARPSTEP-INST v1`, then
//! `key = value` lines holding the generator spec, its seed, the generator
//! algorithm names, and the ground truth as the hex bit patterns of its
//! `f64` entries. Loading regenerates the instance from the spec and checks
//! the stored ground truth bit for bit.

use std::fs;
use std::path::Path;

use crate::kv;
use crate::numerics::{RngStream, NORMAL_TRANSFORM, RNG_ALGORITHM};
use crate::solver::Problem;

use super::{
    AnalyticInstance, CovarianceEstimation, CovarianceSpec, PhaseRetrieval, PhaseRetrievalSpec,
    ProblemError,
};

pub const INSTANCE_MAGIC: &str = "SHARPSTEP-INST v1";

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSpec {
    PhaseRetrieval(PhaseRetrievalSpec),
    Covariance(CovarianceSpec),
    Analytic(AnalyticInstance),
}

impl InstanceSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            InstanceSpec::PhaseRetrieval(_) => "phase-retrieval",
            InstanceSpec::Covariance(_) => "covariance",
            InstanceSpec::Analytic(a) => a.name(),
        }
    }

    pub fn build(&self) -> Result<Instance, ProblemError> {
        Ok(match self {
            InstanceSpec::PhaseRetrieval(s) => {
                Instance::PhaseRetrieval(PhaseRetrieval::generate(s)?)
            }
            InstanceSpec::Covariance(s) => Instance::Covariance(CovarianceEstimation::generate(s)?),
            InstanceSpec::Analytic(a) => Instance::Analytic(*a),
        })
    }
}

/// A generated instance together with the spec that produced it.
#[derive(Debug, Clone)]
pub enum Instance {
    PhaseRetrieval(PhaseRetrieval),
    Covariance(CovarianceEstimation),
    Analytic(AnalyticInstance),
}

impl Instance {
    /// Ground truth (`x̄`, row-major `X̄`, or a solution point), if any.
    pub fn ground_truth(&self) -> Option<Vec<f64>> {
        match self {
            Instance::PhaseRetrieval(p) => p.ground_truth().map(<[f64]>::to_vec),
            Instance::Covariance(c) => c.ground_truth().map(|m| m.as_slice().to_vec()),
            Instance::Analytic(a) => a.solutions().last().cloned(),
        }
    }

    pub fn corrupted_count(&self) -> usize {
        match self {
            Instance::PhaseRetrieval(p) => p.corrupted_count(),
            Instance::Covariance(c) => c.corrupted_count(),
            Instance::Analytic(_) => 0,
        }
    }

    pub fn as_problem(&self) -> &dyn Problem {
        match self {
            Instance::PhaseRetrieval(p) => p,
            Instance::Covariance(c) => c,
            Instance::Analytic(a) => a,
        }
    }

    /// One-line summary: kind, dimensions and corruption count.
    pub fn summary(&self) -> String {
        match self {
            Instance::PhaseRetrieval(p) => format!(
                "phase-retrieval d={} m={} corrupted={}",
                p.d(),
                p.m(),
                p.corrupted_count()
            ),
            Instance::Covariance(c) => format!(
                "covariance d={} r={} m={} corrupted={}",
                c.d(),
                c.r(),
                c.m(),
                c.corrupted_count()
            ),
            Instance::Analytic(a) => format!("{} d={}", a.name(), a.dim()),
        }
    }
}

impl Problem for Instance {
    fn dim(&self) -> usize {
        self.as_problem().dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.as_problem().value(x)
    }
    fn subgradient(&self, x: &[f64]) -> Vec<f64> {
        self.as_problem().subgradient(x)
    }
    fn project(&self, y: &[f64]) -> Vec<f64> {
        self.as_problem().project(y)
    }
    fn min_value(&self) -> Option<f64> {
        self.as_problem().min_value()
    }
    fn distance(&self, x: &[f64]) -> Option<f64> {
        self.as_problem().distance(x)
    }
    fn solution_point(&self, rng: &mut RngStream) -> Option<Vec<f64>> {
        self.as_problem().solution_point(rng)
    }
    fn declared_rho(&self) -> Option<f64> {
        self.as_problem().declared_rho()
    }
    fn distance_scale(&self) -> f64 {
        self.as_problem().distance_scale()
    }
}

fn hex_vec(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{:016x}", x.to_bits()))
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_hex_vec(s: &str) -> Result<Vec<f64>, ProblemError> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|h| {
            u64::from_str_radix(h.trim(), 16)
                .map(f64::from_bits)
                .map_err(|e| ProblemError::Format(format!("bad hex float `{h}`: {e}")))
        })
        .collect()
}

/// Serializes `spec` plus the ground truth of the instance it generates.
pub fn to_text(spec: &InstanceSpec, instance: &Instance) -> String {
    let mut out = format!("{INSTANCE_MAGIC}\n");
    out += &format!("rng = {RNG_ALGORITHM}\nnormal = {NORMAL_TRANSFORM}\n");
    out += &format!("kind = {}\n", spec.kind());
    match spec {
        InstanceSpec::PhaseRetrieval(s) => {
            out += &format!(
                "d = {}\nm = {}\ncorrupted = {}\np = {}\ns = {}\nseed = {}\n",
                s.d, s.m, s.corrupted, s.p, s.s, s.seed
            );
        }
        InstanceSpec::Covariance(s) => {
            out += &format!(
                "d = {}\nr = {}\nm = {}\ncorrupted = {}\np = {}\ns = {}\nseed = {}\n",
                s.d, s.r, s.m, s.corrupted, s.p, s.s, s.seed
            );
        }
        InstanceSpec::Analytic(_) => {}
    }
    out += &format!("corrupted_count = {}\n", instance.corrupted_count());
    out += &format!(
        "ground_truth = {}\n",
        hex_vec(&instance.ground_truth().unwrap_or_default())
    );
    out
}

/// Parses an instance file, regenerates it, and checks the stored ground
/// truth bit for bit.
pub fn from_text(text: &str) -> Result<(InstanceSpec, Instance), ProblemError> {
    let mut lines = text.splitn(2, '\n');
    let magic = lines.next().unwrap_or("").trim_end_matches('\r');
    if magic != INSTANCE_MAGIC {
        return Err(ProblemError::Format(format!(
            "missing magic header `{INSTANCE_MAGIC}`, found `{magic}`"
        )));
    }
    let pairs =
        kv::parse(lines.next().unwrap_or("")).map_err(|e| ProblemError::Format(e.to_string()))?;
    let get = |key: &str| -> Result<&str, ProblemError> {
        pairs
            .iter()
            .find(|(_, k, _)| k == key)
            .map(|(_, _, v)| v.as_str())
            .ok_or_else(|| ProblemError::Format(format!("missing key `{key}`")))
    };
    fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ProblemError> {
        v.parse()
            .map_err(|_| ProblemError::Format(format!("bad value for `{key}`: `{v}`")))
    }

    for (key, want) in [("rng", RNG_ALGORITHM), ("normal", NORMAL_TRANSFORM)] {
        let got = get(key)?;
        if got != want {
            return Err(ProblemError::Format(format!(
                "instance was generated with {key} = {got}, this build uses {want}"
            )));
        }
    }

    let kind = get("kind")?;
    let spec = match kind {
        "phase-retrieval" => InstanceSpec::PhaseRetrieval(PhaseRetrievalSpec {
            d: num("d", get("d")?)?,
            m: num("m", get("m")?)?,
            corrupted: num("corrupted", get("corrupted")?)?,
            p: num("p", get("p")?)?,
            s: num("s", get("s")?)?,
            seed: num("seed", get("seed")?)?,
        }),
        "covariance" => InstanceSpec::Covariance(CovarianceSpec {
            d: num("d", get("d")?)?,
            r: num("r", get("r")?)?,
            m: num("m", get("m")?)?,
            corrupted: num("corrupted", get("corrupted")?)?,
            p: num("p", get("p")?)?,
            s: num("s", get("s")?)?,
            seed: num("seed", get("seed")?)?,
        }),
        other => InstanceSpec::Analytic(
            AnalyticInstance::from_name(other)
                .ok_or_else(|| ProblemError::Format(format!("unknown instance kind `{other}`")))?,
        ),
    };
    let instance = spec.build()?;
    let stored = parse_hex_vec(get("ground_truth")?)?;
    let regenerated = instance.ground_truth().unwrap_or_default();
    let same = stored.len() == regenerated.len()
        && stored
            .iter()
            .zip(&regenerated)
            .all(|(a, b)| a.to_bits() == b.to_bits());
    if !same {
        return Err(ProblemError::Format(
            "regenerated ground truth differs from the stored one".into(),
        ));
    }
    Ok((spec, instance))
}

pub fn save(path: &Path, spec: &InstanceSpec, instance: &Instance) -> Result<(), ProblemError> {
    fs::write(path, to_text(spec, instance))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<(InstanceSpec, Instance), ProblemError> {
    from_text(&fs::read_to_string(path)?)
}
