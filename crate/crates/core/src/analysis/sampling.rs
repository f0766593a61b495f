use rayon::prelude::*;

use crate::numerics::{axpy, RngStream};
use crate::solver::Problem;

use super::AnalysisError;

/// Random points `x = proj_X(x* + r u)` around the solution set, with
/// `x* ∈ X*`, `u` uniform on the sphere and `r` uniform on `(0, radius]`.
///
/// Sample `i` draws from its own stream `(seed, stream + i)`, so the sample
/// set does not depend on how the work is split across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampler {
    pub radius: f64,
    /// Maximal gap `‖y - x‖` for weak-convexity pairs.
    pub pair_radius: f64,
    pub count: usize,
    pub seed: u64,
    pub stream: u64,
}

impl Sampler {
    pub fn new(radius: f64, count: usize, seed: u64) -> Self {
        Self {
            radius,
            pair_radius: 0.1 * radius,
            count,
            seed,
            stream: 1000,
        }
    }

    fn point<P: Problem + ?Sized>(
        &self,
        problem: &P,
        rng: &mut RngStream,
    ) -> Result<Vec<f64>, AnalysisError> {
        let center = problem
            .solution_point(rng)
            .ok_or(AnalysisError::MissingSolutionSet)?;
        let u = rng.unit_sphere(problem.dim());
        let r = self.radius * (1.0 - rng.uniform());
        let mut x = center;
        axpy(r, &u, &mut x);
        Ok(problem.project(&x))
    }

    pub fn points<P: Problem + ?Sized>(&self, problem: &P) -> Result<Vec<Vec<f64>>, AnalysisError> {
        (0..self.count)
            .into_par_iter()
            .map(|i| {
                let mut rng = RngStream::new(self.seed, self.stream + i as u64);
                self.point(problem, &mut rng)
            })
            .collect()
    }

    /// Pairs `(x, y)` with `x` drawn as in [`Sampler::points`] and
    /// `y = proj_X(x + r' u')`, `r'` uniform on `(0, pair_radius]`.
    pub fn pairs<P: Problem + ?Sized>(
        &self,
        problem: &P,
    ) -> Result<Vec<(Vec<f64>, Vec<f64>)>, AnalysisError> {
        let offset = self.stream + self.count as u64;
        (0..self.count)
            .into_par_iter()
            .map(|i| {
                let mut rng = RngStream::new(self.seed, offset + i as u64);
                let x = self.point(problem, &mut rng)?;
                let u = rng.unit_sphere(problem.dim());
                let r = self.pair_radius * (1.0 - rng.uniform());
                let mut y = x.clone();
                axpy(r, &u, &mut y);
                Ok((x, problem.project(&y)))
            })
            .collect()
    }
}

/// `n` evenly spaced points `lo + (hi - lo) i / (n - 1)` as 1-D vectors.
pub fn grid_1d(lo: f64, hi: f64, n: usize) -> Vec<Vec<f64>> {
    match n {
        0 => Vec::new(),
        1 => vec![vec![lo]],
        _ => (0..n)
            .map(|i| vec![lo + (hi - lo) * i as f64 / (n - 1) as f64])
            .collect(),
    }
}

/// Tensor grid on `[lo, hi]²` with `n` points per axis.
pub fn grid_2d(lo: f64, hi: f64, n: usize) -> Vec<Vec<f64>> {
    let axis: Vec<f64> = grid_1d(lo, hi, n).into_iter().map(|p| p[0]).collect();
    axis.iter()
        .flat_map(|&a| axis.iter().map(move |&b| vec![a, b]))
        .collect()
}

/// Pairs `(x, x + gap e_1)` for every grid point.
pub fn pairs_with_gap(points: &[Vec<f64>], gap: f64) -> Vec<(Vec<f64>, Vec<f64>)> {
    points
        .iter()
        .map(|x| {
            let mut y = x.clone();
            y[0] += gap;
            (x.clone(), y)
        })
        .collect()
}
