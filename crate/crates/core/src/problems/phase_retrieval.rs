use crate::numerics::{axpy, dist, dot, norm, norm_sq, Matrix, RngStream};
use crate::solver::Problem;

use super::{check_dim, sign, ProblemError};

/// Stream ids used when generating an instance from its seed.
const STREAM_MEASUREMENTS: u64 = 0;
const STREAM_SIGNAL: u64 = 1;
const STREAM_CORRUPTION: u64 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRetrievalSpec {
    pub d: usize,
    pub m: usize,
    pub corrupted: bool,
    /// Corruption rate.
    pub p: f64,
    /// Outlier standard deviation.
    pub s: f64,
    pub seed: u64,
}

impl PhaseRetrievalSpec {
    pub fn exact(d: usize, m: usize, seed: u64) -> Self {
        Self {
            d,
            m,
            corrupted: false,
            p: 0.1,
            s: 10.0,
            seed,
        }
    }

    pub fn corrupted(d: usize, m: usize, seed: u64) -> Self {
        Self {
            corrupted: true,
            ..Self::exact(d, m, seed)
        }
    }

    pub fn validate(&self) -> Result<(), ProblemError> {
        if self.d == 0 || self.m == 0 {
            return Err(ProblemError::InvalidSpec(format!(
                "phase retrieval needs d >= 1 and m >= 1, got d={} m={}",
                self.d, self.m
            )));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(ProblemError::InvalidSpec(format!(
                "corruption rate must lie in [0,1], got {}",
                self.p
            )));
        }
        if !(self.s >= 0.0 && self.s.is_finite()) {
            return Err(ProblemError::InvalidSpec(format!(
                "outlier std must be nonnegative, got {}",
                self.s
            )));
        }
        Ok(())
    }
}

/// Robust real phase retrieval `min (1/m) Σ |<a_i, x>² - b_i|`.
#[derive(Debug, Clone)]
pub struct PhaseRetrieval {
    a: Matrix,
    b: Vec<f64>,
    x_bar: Option<Vec<f64>>,
    corrupted: Vec<bool>,
    exact: bool,
}

impl PhaseRetrieval {
    /// Draws `a_i ~ N(0, I)`, `x̄ ~ N(0, I)` and `b_i = <a_i, x̄>²`; in the
    /// corrupted set-up each `b_i` is replaced by `|ζ_i|`, `ζ_i ~ N(0, s²)`,
    /// with probability `p`.
    pub fn generate(spec: &PhaseRetrievalSpec) -> Result<Self, ProblemError> {
        spec.validate()?;
        let (d, m) = (spec.d, spec.m);
        let mut rng_a = RngStream::new(spec.seed, STREAM_MEASUREMENTS);
        let a = Matrix::from_vec(m, d, rng_a.sample_gaussian(m * d))?;
        let x_bar = RngStream::new(spec.seed, STREAM_SIGNAL).sample_gaussian(d);
        let mut b: Vec<f64> = (0..m).map(|i| dot(a.row(i), &x_bar).powi(2)).collect();
        let mut corrupted = vec![false; m];
        if spec.corrupted {
            let mut rng_z = RngStream::new(spec.seed, STREAM_CORRUPTION);
            for (bi, zi) in b.iter_mut().zip(corrupted.iter_mut()) {
                let hit = rng_z.bernoulli(spec.p);
                let outlier = (spec.s * rng_z.normal()).abs();
                if hit {
                    *zi = true;
                    *bi = outlier;
                }
            }
        }
        Ok(Self {
            a,
            b,
            x_bar: Some(x_bar),
            corrupted,
            exact: !spec.corrupted,
        })
    }

    /// Builds an instance from explicit measurements (`a` is `m x d`).
    /// `exact` declares that `x̄` attains objective 0.
    pub fn from_parts(
        a: Matrix,
        b: Vec<f64>,
        x_bar: Option<Vec<f64>>,
        exact: bool,
    ) -> Result<Self, ProblemError> {
        if a.rows() != b.len() || a.rows() == 0 || a.cols() == 0 {
            return Err(ProblemError::DimensionMismatch {
                expected: a.rows(),
                got: b.len(),
            });
        }
        if let Some(xb) = &x_bar {
            check_dim(a.cols(), xb.len())?;
        }
        let m = b.len();
        Ok(Self {
            a,
            b,
            x_bar,
            corrupted: vec![false; m],
            exact,
        })
    }

    pub fn d(&self) -> usize {
        self.a.cols()
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn measurements(&self) -> &Matrix {
        &self.a
    }

    pub fn observations(&self) -> &[f64] {
        &self.b
    }

    pub fn ground_truth(&self) -> Option<&[f64]> {
        self.x_bar.as_deref()
    }

    pub fn corrupted_count(&self) -> usize {
        self.corrupted.iter().filter(|z| **z).count()
    }

    pub fn corruption_mask(&self) -> &[bool] {
        &self.corrupted
    }

    /// `(1/m) Σ |<a_i, x>² - b_i|`
    pub fn objective(&self, x: &[f64]) -> Result<f64, ProblemError> {
        check_dim(self.d(), x.len())?;
        Ok(self.objective_unchecked(x))
    }

    /// `(1/m) Σ sign(<a_i, x>² - b_i) 2 <a_i, x> a_i`, with `sign(0) = 0`.
    pub fn subgradient_at(&self, x: &[f64]) -> Result<Vec<f64>, ProblemError> {
        check_dim(self.d(), x.len())?;
        Ok(self.subgradient_unchecked(x))
    }

    fn objective_unchecked(&self, x: &[f64]) -> f64 {
        let total: f64 = (0..self.m())
            .map(|i| (dot(self.a.row(i), x).powi(2) - self.b[i]).abs())
            .sum();
        total / self.m() as f64
    }

    fn subgradient_unchecked(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.d()];
        for i in 0..self.m() {
            let ai = self.a.row(i);
            let inner = dot(ai, x);
            let s = sign(inner * inner - self.b[i]);
            if s != 0.0 {
                axpy(s * 2.0 * inner, ai, &mut g);
            }
        }
        let inv_m = 1.0 / self.m() as f64;
        g.iter_mut().for_each(|v| *v *= inv_m);
        g
    }
}

/// `min(‖x - x̄‖, ‖x + x̄‖)`: distance up to the global sign ambiguity.
pub fn pr_distance(x: &[f64], x_bar: &[f64]) -> Result<f64, ProblemError> {
    check_dim(x_bar.len(), x.len())?;
    Ok(pr_distance_unchecked(x, x_bar))
}

fn pr_distance_unchecked(x: &[f64], x_bar: &[f64]) -> f64 {
    let plus: f64 = x
        .iter()
        .zip(x_bar)
        .map(|(a, b)| (a + b) * (a + b))
        .sum::<f64>()
        .sqrt();
    dist(x, x_bar).min(plus)
}

impl Problem for PhaseRetrieval {
    fn dim(&self) -> usize {
        self.d()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.objective_unchecked(x)
    }

    fn subgradient(&self, x: &[f64]) -> Vec<f64> {
        self.subgradient_unchecked(x)
    }

    fn min_value(&self) -> Option<f64> {
        self.exact.then_some(0.0)
    }

    fn distance(&self, x: &[f64]) -> Option<f64> {
        self.x_bar.as_ref().map(|xb| pr_distance_unchecked(x, xb))
    }

    fn solution_point(&self, rng: &mut RngStream) -> Option<Vec<f64>> {
        let xb = self.x_bar.as_ref()?;
        let s = if rng.uniform() < 0.5 { 1.0 } else { -1.0 };
        Some(xb.iter().map(|v| s * v).collect())
    }

    /// Each term `|<a_i,x>² - b_i|` is `2‖a_i‖²`-weakly convex.
    fn declared_rho(&self) -> Option<f64> {
        let total: f64 = (0..self.m()).map(|i| 2.0 * norm_sq(self.a.row(i))).sum();
        Some(total / self.m() as f64)
    }

    fn distance_scale(&self) -> f64 {
        self.x_bar.as_ref().map_or(1.0, |xb| norm(xb))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single() -> PhaseRetrieval {
        PhaseRetrieval::from_parts(
            Matrix::from_vec(1, 1, vec![1.0]).unwrap(),
            vec![1.0],
            Some(vec![1.0]),
            true,
        )
        .unwrap()
    }

    #[test]
    fn single_measurement_by_hand() {
        let p = single();
        assert_eq!(p.objective(&[2.0]).unwrap(), 3.0);
        assert_eq!(p.subgradient_at(&[2.0]).unwrap(), vec![4.0]);
        assert_eq!(p.subgradient_at(&[0.0]).unwrap(), vec![0.0]);
        assert!(p.objective(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn exact_setup_vanishes_at_both_signs() {
        let p = PhaseRetrieval::generate(&PhaseRetrievalSpec::exact(10, 40, 3)).unwrap();
        let xb = p.ground_truth().unwrap().to_vec();
        let neg: Vec<f64> = xb.iter().map(|v| -v).collect();
        assert!(p.objective(&xb).unwrap() < 1e-12);
        assert!(p.objective(&neg).unwrap() < 1e-12);
        assert_eq!(p.min_value(), Some(0.0));
        let x: Vec<f64> = (0..10).map(|i| i as f64 * 0.1 - 0.4).collect();
        let xn: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_eq!(p.value(&x), p.value(&xn));
    }

    #[test]
    fn zero_is_stationary() {
        let p = PhaseRetrieval::generate(&PhaseRetrievalSpec::exact(5, 20, 1)).unwrap();
        assert!(p.subgradient(&[0.0; 5]).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = PhaseRetrievalSpec::corrupted(8, 30, 42);
        let p = PhaseRetrieval::generate(&spec).unwrap();
        let q = PhaseRetrieval::generate(&spec).unwrap();
        assert_eq!(p.measurements(), q.measurements());
        assert_eq!(p.observations(), q.observations());
        assert_eq!(p.ground_truth(), q.ground_truth());
        assert_eq!(p.min_value(), None);
    }

    #[test]
    fn corruption_rate_concentrates() {
        let p = PhaseRetrieval::generate(&PhaseRetrievalSpec::corrupted(1, 100_000, 9)).unwrap();
        let frac = p.corrupted_count() as f64 / 100_000.0;
        assert!((frac - 0.1).abs() < 0.005, "{frac}");
    }

    #[test]
    fn distance_is_sign_invariant() {
        let xb = [1.0, -2.0, 0.5];
        assert_eq!(pr_distance(&[-1.0, 2.0, -0.5], &xb).unwrap(), 0.0);
        let d = pr_distance(&[1.0 + 1e-3, -2.0, 0.5], &xb).unwrap();
        assert!((d - 1e-3).abs() < 1e-15);
        let mut rng = RngStream::new(4, 4);
        for _ in 0..50 {
            let x = rng.sample_gaussian(3);
            let brute = [1.0, -1.0]
                .iter()
                .map(|s| {
                    x.iter()
                        .zip(&xb)
                        .map(|(a, b)| (a - s * b).powi(2))
                        .sum::<f64>()
                        .sqrt()
                })
                .fold(f64::INFINITY, f64::min);
            assert!((pr_distance(&x, &xb).unwrap() - brute).abs() < 1e-14);
        }
        assert!(pr_distance(&[1.0], &xb).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(PhaseRetrieval::generate(&PhaseRetrievalSpec::exact(0, 3, 1)).is_err());
        let mut bad = PhaseRetrievalSpec::corrupted(2, 3, 1);
        bad.p = 1.5;
        assert!(bad.validate().is_err());
    }
}
