use std::fmt;

use rayon::prelude::*;

use crate::numerics::{dot, norm, sub, RngStream};
use crate::solver::Problem;

use super::{AnalysisError, Sampler};

/// Empirical `(mu, rho, L, tau)`.
///
/// The estimators are one-sided: `mu` is an upper bound on the sharpness
/// constant restricted to the sampled region, while `rho` and `lip` are lower
/// bounds. None of them is a certified constant.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamEstimates {
    pub mu: f64,
    pub rho: f64,
    pub lip: f64,
    pub tau: f64,
    pub samples: usize,
    pub pair_samples: usize,
    /// Points that fell in the estimated tube `T_1` and entered `lip`.
    pub tube_samples: usize,
    pub radius: f64,
    pub pair_radius: f64,
    pub seed: u64,
    /// Value subtracted in the sharpness ratio.
    pub reference_value: f64,
    /// Whether `reference_value` is the known optimal value (otherwise it is
    /// the objective at a ground-truth point).
    pub reference_is_min: bool,
}

impl fmt::Display for ParamEstimates {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "mu_hat  = {:.10}  (upper bound on sharpness over the sample)",
            self.mu
        )?;
        writeln!(
            f,
            "rho_hat = {:.10}  (lower bound on weak convexity)",
            self.rho
        )?;
        writeln!(
            f,
            "L_hat   = {:.10}  (lower bound on sup subgradient norm over T_1)",
            self.lip
        )?;
        writeln!(f, "tau_hat = {:.10}", self.tau)?;
        writeln!(
            f,
            "samples = {}  pairs = {}  tube_samples = {}  radius = {}  pair_radius = {}  seed = {}",
            self.samples,
            self.pair_samples,
            self.tube_samples,
            self.radius,
            self.pair_radius,
            self.seed
        )?;
        write!(
            f,
            "reference_value = {} ({})",
            self.reference_value,
            if self.reference_is_min {
                "known minimum"
            } else {
                "objective at ground truth"
            }
        )
    }
}

/// The known optimal value, or else the objective at a solution point.
pub fn reference_value<P: Problem + ?Sized>(problem: &P) -> Result<(f64, bool), AnalysisError> {
    if let Some(m) = problem.min_value() {
        return Ok((m, true));
    }
    let mut rng = RngStream::new(0, 0);
    let x = problem
        .solution_point(&mut rng)
        .ok_or(AnalysisError::MissingSolutionSet)?;
    Ok((problem.value(&x), false))
}

/// `min (g(x) - min g) / dist(x; X*)` over sampled `x ∉ X*`.
pub fn estimate_sharpness<P: Problem + ?Sized>(
    problem: &P,
    points: &[Vec<f64>],
    min_value: f64,
) -> Result<f64, AnalysisError> {
    let ratios: Vec<Option<f64>> = points
        .par_iter()
        .map(|x| {
            let d = problem.distance(x).ok_or(AnalysisError::MissingDistance)?;
            Ok((d > 0.0).then(|| (problem.value(x) - min_value) / d))
        })
        .collect::<Result<_, AnalysisError>>()?;
    ratios
        .into_iter()
        .flatten()
        .reduce(f64::min)
        .ok_or(AnalysisError::NoValidSamples("every sample landed in X*"))
}

/// `max 2 (g(x) + <v, y - x> - g(y)) / ‖y - x‖²` over pairs with `x ≠ y`,
/// clamped below at 0.
pub fn estimate_weak_convexity<P: Problem + ?Sized>(
    problem: &P,
    pairs: &[(Vec<f64>, Vec<f64>)],
) -> f64 {
    pairs
        .par_iter()
        .map(|(x, y)| {
            let step = sub(y, x);
            let gap2 = dot(&step, &step);
            if gap2 == 0.0 {
                return 0.0;
            }
            let v = problem.subgradient(x);
            2.0 * (problem.value(x) + dot(&v, &step) - problem.value(y)) / gap2
        })
        .reduce(|| 0.0, f64::max)
}

/// `max ‖ζ(x)‖` over sampled `x` with `dist(x; X*) < mu / rho`. A zero `rho`
/// means the tube is the whole space.
pub fn estimate_l<P: Problem + ?Sized>(
    problem: &P,
    mu: f64,
    rho: f64,
    points: &[Vec<f64>],
) -> Result<(f64, usize), AnalysisError> {
    let radius = if rho > 0.0 { mu / rho } else { f64::INFINITY };
    let norms: Vec<Option<f64>> = points
        .par_iter()
        .map(|x| {
            let d = problem.distance(x).ok_or(AnalysisError::MissingDistance)?;
            Ok((d < radius).then(|| norm(&problem.subgradient(x))))
        })
        .collect::<Result<_, AnalysisError>>()?;
    let inside: Vec<f64> = norms.into_iter().flatten().collect();
    let count = inside.len();
    inside
        .into_iter()
        .reduce(f64::max)
        .map(|l| (l, count))
        .ok_or(AnalysisError::NoValidSamples(
            "no sample inside the tube T_1",
        ))
}

/// Runs the three estimators on one sampler's points and pairs.
pub fn estimate_params<P: Problem + ?Sized>(
    problem: &P,
    sampler: &Sampler,
) -> Result<ParamEstimates, AnalysisError> {
    let (reference, is_min) = reference_value(problem)?;
    let points = sampler.points(problem)?;
    let pairs = sampler.pairs(problem)?;
    estimate_from_samples(problem, &points, &pairs, reference, is_min).map(|mut e| {
        e.radius = sampler.radius;
        e.pair_radius = sampler.pair_radius;
        e.seed = sampler.seed;
        e
    })
}

/// Estimates from explicit point and pair sets (e.g. grids).
pub fn estimate_from_samples<P: Problem + ?Sized>(
    problem: &P,
    points: &[Vec<f64>],
    pairs: &[(Vec<f64>, Vec<f64>)],
    reference: f64,
    reference_is_min: bool,
) -> Result<ParamEstimates, AnalysisError> {
    let mu = estimate_sharpness(problem, points, reference)?;
    let rho = estimate_weak_convexity(problem, pairs);
    let (lip, tube_samples) = estimate_l(problem, mu, rho, points)?;
    Ok(ParamEstimates {
        mu,
        rho,
        lip,
        tau: mu / lip,
        samples: points.len(),
        pair_samples: pairs.len(),
        tube_samples,
        radius: f64::NAN,
        pair_radius: f64::NAN,
        seed: 0,
        reference_value: reference,
        reference_is_min,
    })
}
