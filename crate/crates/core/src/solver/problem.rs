use crate::numerics::RngStream;

/// Oracles for `min_{x ∈ X} g(x)`.
///
/// Implementations must be immutable after construction so that independent
/// solves can share one instance across threads. Variables are flat `f64`
/// slices; matrix variables use the row-major flattening of
/// [`Matrix`](crate::numerics::Matrix).
pub trait Problem: Send + Sync {
    fn dim(&self) -> usize;

    /// Objective value `g(x)`.
    fn value(&self, x: &[f64]) -> f64;

    /// One element of the subdifferential `∂g(x)`.
    fn subgradient(&self, x: &[f64]) -> Vec<f64>;

    /// Projection onto the closed convex feasible set. Identity by default.
    fn project(&self, y: &[f64]) -> Vec<f64> {
        y.to_vec()
    }

    /// `min_X g`, when known.
    fn min_value(&self) -> Option<f64> {
        None
    }

    /// `dist(x; X*)`, when the solution set is known.
    fn distance(&self, _x: &[f64]) -> Option<f64> {
        None
    }

    /// Draws a point of the solution set `X*`.
    fn solution_point(&self, _rng: &mut RngStream) -> Option<Vec<f64>> {
        None
    }

    /// A weak-convexity constant the instance is known to satisfy.
    fn declared_rho(&self) -> Option<f64> {
        None
    }

    /// Length used to normalize distances in reports (e.g. `‖x̄‖`).
    fn distance_scale(&self) -> f64 {
        1.0
    }
}

impl<P: Problem + ?Sized> Problem for &P {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn subgradient(&self, x: &[f64]) -> Vec<f64> {
        (**self).subgradient(x)
    }
    fn project(&self, y: &[f64]) -> Vec<f64> {
        (**self).project(y)
    }
    fn min_value(&self) -> Option<f64> {
        (**self).min_value()
    }
    fn distance(&self, x: &[f64]) -> Option<f64> {
        (**self).distance(x)
    }
    fn solution_point(&self, rng: &mut RngStream) -> Option<Vec<f64>> {
        (**self).solution_point(rng)
    }
    fn declared_rho(&self) -> Option<f64> {
        (**self).declared_rho()
    }
    fn distance_scale(&self) -> f64 {
        (**self).distance_scale()
    }
}

impl<P: Problem + ?Sized> Problem for Box<P> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn subgradient(&self, x: &[f64]) -> Vec<f64> {
        (**self).subgradient(x)
    }
    fn project(&self, y: &[f64]) -> Vec<f64> {
        (**self).project(y)
    }
    fn min_value(&self) -> Option<f64> {
        (**self).min_value()
    }
    fn distance(&self, x: &[f64]) -> Option<f64> {
        (**self).distance(x)
    }
    fn solution_point(&self, rng: &mut RngStream) -> Option<Vec<f64>> {
        (**self).solution_point(rng)
    }
    fn declared_rho(&self) -> Option<f64> {
        (**self).declared_rho()
    }
    fn distance_scale(&self) -> f64 {
        (**self).distance_scale()
    }
}
