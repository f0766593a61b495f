use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::linalg::norm;

/// Name of the underlying generator, recorded in run metadata.
pub const RNG_ALGORITHM: &str = "chacha20";
/// Name of the uniform-to-normal transform, recorded in run metadata.
pub const NORMAL_TRANSFORM: &str = "box-muller";

/// A reproducible random stream keyed by `(seed, stream id)`.
///
/// Uniforms take the top 53 bits of each ChaCha20 output word; normals come
/// from the basic Box-Muller transform, consumed in pairs (the second value
/// of each pair is cached). Two streams with equal keys produce identical
/// sequences.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self {
            seed,
            stream,
            rng,
            spare: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream
    }

    pub fn algorithm(&self) -> &'static str {
        RNG_ALGORITHM
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`.
    fn uniform_open0(&mut self) -> f64 {
        1.0 - self.uniform()
    }

    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform_open0();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// `n` i.i.d. standard normal samples.
    pub fn sample_gaussian(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.normal()).collect()
    }

    /// Uniform direction on the unit sphere in `R^n`.
    pub fn unit_sphere(&mut self, n: usize) -> Vec<f64> {
        loop {
            let mut v = self.sample_gaussian(n);
            let len = norm(&v);
            if len > 0.0 {
                v.iter_mut().for_each(|x| *x /= len);
                return v;
            }
        }
    }
}
