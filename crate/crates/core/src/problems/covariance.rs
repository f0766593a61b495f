use crate::numerics::{dot, norm_sq, random_orthogonal, svd_small, Matrix, RngStream};
use crate::solver::Problem;

use super::{sign, ProblemError};

const STREAM_MEASUREMENTS: u64 = 0;
const STREAM_SIGNAL: u64 = 1;
const STREAM_CORRUPTION: u64 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceSpec {
    pub d: usize,
    pub r: usize,
    /// Measurement count; must be even.
    pub m: usize,
    pub corrupted: bool,
    pub p: f64,
    pub s: f64,
    pub seed: u64,
}

impl CovarianceSpec {
    pub fn exact(d: usize, r: usize, m: usize, seed: u64) -> Self {
        Self {
            d,
            r,
            m,
            corrupted: false,
            p: 0.1,
            s: 10.0,
            seed,
        }
    }

    pub fn corrupted(d: usize, r: usize, m: usize, seed: u64) -> Self {
        Self {
            corrupted: true,
            ..Self::exact(d, r, m, seed)
        }
    }

    pub fn validate(&self) -> Result<(), ProblemError> {
        if self.r == 0 || self.d < self.r {
            return Err(ProblemError::InvalidSpec(format!(
                "covariance estimation needs d >= r >= 1, got d={} r={}",
                self.d, self.r
            )));
        }
        if self.m == 0 || !self.m.is_multiple_of(2) {
            return Err(ProblemError::InvalidSpec(format!(
                "measurement count m must be even and positive, got {}",
                self.m
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

/// Covariance estimation from quadratic measurements, in the pairwise
/// difference form
/// `(2/m) Σ_i |<XXᵀ, a⁺a⁺ᵀ - a⁻a⁻ᵀ> - (b⁺ - b⁻)|` over the `m/2` pairs
/// `(a⁺, a⁻) = (a_{2i}, a_{2i-1})`.
///
/// The variable is `X ∈ R^{d x r}` flattened row-major. No `d x d` matrix is
/// ever formed: `<XXᵀ, aaᵀ> = ‖Xᵀa‖²`.
#[derive(Debug, Clone)]
pub struct CovarianceEstimation {
    r: usize,
    a: Matrix,
    b: Vec<f64>,
    x_bar: Option<Matrix>,
    corrupted: Vec<bool>,
    exact: bool,
}

impl CovarianceEstimation {
    pub fn generate(spec: &CovarianceSpec) -> Result<Self, ProblemError> {
        spec.validate()?;
        let (d, r, m) = (spec.d, spec.r, spec.m);
        let a = Matrix::from_vec(
            m,
            d,
            RngStream::new(spec.seed, STREAM_MEASUREMENTS).sample_gaussian(m * d),
        )?;
        let x_bar = Matrix::from_vec(
            d,
            r,
            RngStream::new(spec.seed, STREAM_SIGNAL).sample_gaussian(d * r),
        )?;
        let mut b: Vec<f64> = (0..m).map(|i| norm_sq(&x_bar.t_matvec(a.row(i)))).collect();
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
            r,
            a,
            b,
            x_bar: Some(x_bar),
            corrupted,
            exact: !spec.corrupted,
        })
    }

    /// Explicit measurements: `a` is `m x d` with `m` even.
    pub fn from_parts(
        a: Matrix,
        b: Vec<f64>,
        r: usize,
        x_bar: Option<Matrix>,
        exact: bool,
    ) -> Result<Self, ProblemError> {
        if a.rows() != b.len() {
            return Err(ProblemError::DimensionMismatch {
                expected: a.rows(),
                got: b.len(),
            });
        }
        if b.is_empty() || !b.len().is_multiple_of(2) || r == 0 {
            return Err(ProblemError::InvalidSpec(format!(
                "need an even, positive measurement count and r >= 1, got m={} r={r}",
                b.len()
            )));
        }
        if let Some(xb) = &x_bar {
            if xb.shape() != (a.cols(), r) {
                return Err(ProblemError::DimensionMismatch {
                    expected: a.cols() * r,
                    got: xb.rows() * xb.cols(),
                });
            }
        }
        let m = b.len();
        Ok(Self {
            r,
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

    pub fn r(&self) -> usize {
        self.r
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

    pub fn ground_truth(&self) -> Option<&Matrix> {
        self.x_bar.as_ref()
    }

    pub fn corrupted_count(&self) -> usize {
        self.corrupted.iter().filter(|z| **z).count()
    }

    pub fn corruption_mask(&self) -> &[bool] {
        &self.corrupted
    }

    pub fn objective(&self, x: &Matrix) -> Result<f64, ProblemError> {
        self.check_shape(x)?;
        Ok(self.objective_flat(x.as_slice()))
    }

    pub fn subgradient_at(&self, x: &Matrix) -> Result<Matrix, ProblemError> {
        self.check_shape(x)?;
        Ok(Matrix::from_vec(
            self.d(),
            self.r,
            self.subgradient_flat(x.as_slice()),
        )?)
    }

    fn check_shape(&self, x: &Matrix) -> Result<(), ProblemError> {
        if x.shape() != (self.d(), self.r) {
            return Err(ProblemError::DimensionMismatch {
                expected: self.d() * self.r,
                got: x.rows() * x.cols(),
            });
        }
        Ok(())
    }

    /// `Xᵀ a` for a row-major flattened `X`.
    fn project_row(&self, x: &[f64], ai: &[f64]) -> Vec<f64> {
        let r = self.r;
        let mut out = vec![0.0; r];
        for (k, aik) in ai.iter().enumerate() {
            let xrow = &x[k * r..(k + 1) * r];
            for (o, v) in out.iter_mut().zip(xrow) {
                *o += aik * v;
            }
        }
        out
    }

    fn pair_residual(&self, x: &[f64], pair: usize) -> (f64, Vec<f64>, Vec<f64>) {
        let (plus, minus) = (2 * pair + 1, 2 * pair);
        let up = self.project_row(x, self.a.row(plus));
        let um = self.project_row(x, self.a.row(minus));
        let resid = dot(&up, &up) - dot(&um, &um) - (self.b[plus] - self.b[minus]);
        (resid, up, um)
    }

    fn objective_flat(&self, x: &[f64]) -> f64 {
        let pairs = self.m() / 2;
        let total: f64 = (0..pairs).map(|i| self.pair_residual(x, i).0.abs()).sum();
        total / pairs as f64
    }

    /// `(2/m) Σ s_i 2 (a⁺ (a⁺ᵀX) - a⁻ (a⁻ᵀX))`
    fn subgradient_flat(&self, x: &[f64]) -> Vec<f64> {
        let (d, r) = (self.d(), self.r);
        let pairs = self.m() / 2;
        let mut g = vec![0.0; d * r];
        for i in 0..pairs {
            let (resid, up, um) = self.pair_residual(x, i);
            let s = sign(resid);
            if s == 0.0 {
                continue;
            }
            let (ap, am) = (self.a.row(2 * i + 1), self.a.row(2 * i));
            for k in 0..d {
                let grow = &mut g[k * r..(k + 1) * r];
                let (cp, cm) = (2.0 * s * ap[k], 2.0 * s * am[k]);
                for j in 0..r {
                    grow[j] += cp * up[j] - cm * um[j];
                }
            }
        }
        let inv = 1.0 / pairs as f64;
        g.iter_mut().for_each(|v| *v *= inv);
        g
    }
}

/// `min_{R orthogonal} ‖XR - X̄‖_F`, divided by `‖X̄‖_F` if `normalized`.
///
/// The minimizer is the polar factor `R = U Vᵀ` of `XᵀX̄ = U Σ Vᵀ`; the
/// residual is formed explicitly so that small distances keep full relative
/// accuracy.
pub fn procrustes_distance(
    x: &Matrix,
    x_bar: &Matrix,
    normalized: bool,
) -> Result<f64, ProblemError> {
    if x.shape() != x_bar.shape() {
        return Err(ProblemError::DimensionMismatch {
            expected: x_bar.rows() * x_bar.cols(),
            got: x.rows() * x.cols(),
        });
    }
    let scale = if normalized {
        let n = x_bar.frobenius_norm();
        if n == 0.0 {
            return Err(ProblemError::InvalidSpec(
                "normalized Procrustes distance needs a nonzero reference".into(),
            ));
        }
        n
    } else {
        1.0
    };
    let m = x.t_matmul(x_bar)?;
    let (u, _, v) = svd_small(&m)?;
    let rot = u.matmul(&v.transpose())?;
    let aligned = x.matmul(&rot)?;
    let resid: f64 = aligned
        .as_slice()
        .iter()
        .zip(x_bar.as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(resid.sqrt() / scale)
}

impl Problem for CovarianceEstimation {
    fn dim(&self) -> usize {
        self.d() * self.r
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.objective_flat(x)
    }

    fn subgradient(&self, x: &[f64]) -> Vec<f64> {
        self.subgradient_flat(x)
    }

    fn min_value(&self) -> Option<f64> {
        self.exact.then_some(0.0)
    }

    fn distance(&self, x: &[f64]) -> Option<f64> {
        let xb = self.x_bar.as_ref()?;
        let xm = Matrix::from_vec(self.d(), self.r, x.to_vec()).ok()?;
        procrustes_distance(&xm, xb, false).ok()
    }

    fn solution_point(&self, rng: &mut RngStream) -> Option<Vec<f64>> {
        let xb = self.x_bar.as_ref()?;
        let rot = random_orthogonal(rng, self.r);
        Some(xb.matmul(&rot).ok()?.into_vec())
    }

    /// Each pair term is `2 max(‖a⁺‖², ‖a⁻‖²)`-weakly convex.
    fn declared_rho(&self) -> Option<f64> {
        let pairs = self.m() / 2;
        let total: f64 = (0..pairs)
            .map(|i| 2.0 * norm_sq(self.a.row(2 * i + 1)).max(norm_sq(self.a.row(2 * i))))
            .sum();
        Some(total / pairs as f64)
    }

    fn distance_scale(&self) -> f64 {
        self.x_bar.as_ref().map_or(1.0, Matrix::frobenius_norm)
    }
}
