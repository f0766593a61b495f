use crate::numerics::RngStream;
use crate::solver::Problem;

use super::ProblemError;

type ScalarFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type VectorFn = Box<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
type JtFn = Box<dyn Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync>;

/// Convex outer function `h: R^m -> R` given by its value and a subgradient
/// selection.
pub struct ConvexOracle {
    pub value: ScalarFn,
    pub subgradient: VectorFn,
}

impl ConvexOracle {
    pub fn new<V, S>(value: V, subgradient: S) -> Self
    where
        V: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        S: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self {
            value: Box::new(value),
            subgradient: Box::new(subgradient),
        }
    }
}

/// Smooth inner map `c: R^d -> R^m` given by its value and the adjoint of its
/// Jacobian, `(x, v) ↦ ∇c(x)* v`.
pub struct SmoothMap {
    pub value: VectorFn,
    pub jacobian_t: JtFn,
}

impl SmoothMap {
    pub fn new<V, J>(value: V, jacobian_t: J) -> Self
    where
        V: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        J: Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self {
            value: Box::new(value),
            jacobian_t: Box::new(jacobian_t),
        }
    }
}

/// `F = h ∘ c` with chain-rule subgradients `∇c(x)* v`, `v ∈ ∂h(c(x))`.
pub struct Composite {
    dim: usize,
    outer: ConvexOracle,
    inner: SmoothMap,
    min_value: Option<f64>,
    distance: Option<ScalarFn>,
    solutions: Vec<Vec<f64>>,
    rho: Option<f64>,
}

/// Builds `h ∘ c` on `R^dim`. Dimensions are checked by probing the oracles
/// at the origin.
pub fn make_composite(
    dim: usize,
    outer: ConvexOracle,
    inner: SmoothMap,
) -> Result<Composite, ProblemError> {
    let origin = vec![0.0; dim];
    let c0 = (inner.value)(&origin);
    let v0 = (outer.subgradient)(&c0);
    if v0.len() != c0.len() {
        return Err(ProblemError::DimensionMismatch {
            expected: c0.len(),
            got: v0.len(),
        });
    }
    let g0 = (inner.jacobian_t)(&origin, &v0);
    if g0.len() != dim {
        return Err(ProblemError::DimensionMismatch {
            expected: dim,
            got: g0.len(),
        });
    }
    Ok(Composite {
        dim,
        outer,
        inner,
        min_value: None,
        distance: None,
        solutions: Vec::new(),
        rho: None,
    })
}

impl Composite {
    pub fn with_min_value(mut self, min_value: f64) -> Self {
        self.min_value = Some(min_value);
        self
    }

    pub fn with_distance<D>(mut self, distance: D) -> Self
    where
        D: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        self.distance = Some(Box::new(distance));
        self
    }

    /// Points of `X*` to sample from (one is picked uniformly).
    pub fn with_solutions(mut self, solutions: Vec<Vec<f64>>) -> Self {
        self.solutions = solutions;
        self
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = Some(rho);
        self
    }
}

impl Problem for Composite {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        (self.outer.value)(&(self.inner.value)(x))
    }

    fn subgradient(&self, x: &[f64]) -> Vec<f64> {
        let c = (self.inner.value)(x);
        let v = (self.outer.subgradient)(&c);
        (self.inner.jacobian_t)(x, &v)
    }

    fn min_value(&self) -> Option<f64> {
        self.min_value
    }

    fn distance(&self, x: &[f64]) -> Option<f64> {
        self.distance.as_ref().map(|d| d(x))
    }

    fn solution_point(&self, rng: &mut RngStream) -> Option<Vec<f64>> {
        if self.solutions.is_empty() {
            return None;
        }
        let i =
            ((rng.uniform() * self.solutions.len() as f64) as usize).min(self.solutions.len() - 1);
        Some(self.solutions[i].clone())
    }

    fn declared_rho(&self) -> Option<f64> {
        self.rho
    }
}
