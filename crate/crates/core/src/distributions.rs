//! Primitive laws used by the samplers and by the exact-pmf oracles.
//!
//! Every random draw in the crate goes through [`RngStream`], a ChaCha20
//! generator keyed by `(seed, stream_id)`. Two streams with the same key
//! produce bit-identical sequences; distinct stream ids select disjoint
//! ChaCha streams, which is how parallel replicates stay independent and
//! reproducible.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use statrs::function::gamma::ln_gamma;

use crate::error::{domain, Error, Result};

/// Seeded, splittable random stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    inner: ChaCha20Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha20Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform draw on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Uniform draw on `(0, 1]`, safe to take the logarithm of.
    pub fn uniform_open0(&mut self) -> f64 {
        1.0 - self.inner.random::<f64>()
    }

    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.inner)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// A normalized density on `R^d` that can be evaluated in log space.
pub trait LogDensity: Send + Sync {
    fn dim(&self) -> usize;
    fn log_pdf(&self, x: &[f64]) -> f64;
}

/// A normalized density that can also be sampled; used as an envelope proposal.
pub trait Proposal: LogDensity {
    fn sample(&self, rng: &mut RngStream) -> Vec<f64>;

    /// Point used when probing an envelope for violations. Defaults to a plain
    /// draw; heavy-tailed overrides reach further into the tails.
    fn probe(&self, rng: &mut RngStream) -> Vec<f64> {
        self.sample(rng)
    }
}

/// How geometric variates are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GeometricSampling {
    /// Closed-form inversion, one uniform per draw.
    #[default]
    Inversion,
    /// Bernoulli trials until the first success. Its cost grows with `1/p`;
    /// only meant for demonstrations of the runtime channel.
    Trials,
}

/// `Geom(p)` on `{1, 2, ...}`.
///
/// The law keeps `log(1 - p)` alongside `p` so that batched laws
/// (`1 - (1-p)^k`) keep full relative precision in their survival function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricLaw {
    p: f64,
    log_fail: f64,
}

impl GeometricLaw {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return domain(format!("geometric success probability must lie in (0, 1], got {p}"));
        }
        Ok(Self {
            p,
            log_fail: (-p).ln_1p(),
        })
    }

    /// Builds the law from `log(1 - p)`, which must be `<= 0` (`-inf` means `p = 1`).
    pub fn from_log_survival(log_fail: f64) -> Result<Self> {
        if !(log_fail < 0.0) {
            return domain(format!("log survival must be negative, got {log_fail}"));
        }
        Ok(Self {
            p: -log_fail.exp_m1(),
            log_fail,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `log(1 - p)`.
    pub fn log_survival(&self) -> f64 {
        self.log_fail
    }

    /// Law of the minimum of `k` independent copies (equivalently, batches of `k` trials).
    pub fn batched(&self, k: u64) -> Result<Self> {
        if k == 0 {
            return domain("batch size must be at least 1");
        }
        Self::from_log_survival(self.log_fail * k as f64)
    }

    pub fn mean(&self) -> f64 {
        1.0 / self.p
    }

    /// `log P(T = k)`.
    pub fn log_pmf(&self, k: u64) -> Result<f64> {
        if k < 1 {
            return domain("geometric support starts at k = 1");
        }
        if k == 1 {
            return Ok(self.p.ln());
        }
        Ok((k - 1) as f64 * self.log_fail + self.p.ln())
    }

    pub fn pmf(&self, k: u64) -> Result<f64> {
        self.log_pmf(k).map(f64::exp)
    }

    /// `P(T <= k) = 1 - (1-p)^k`.
    pub fn cdf(&self, k: u64) -> f64 {
        if k == 0 {
            return 0.0;
        }
        -(k as f64 * self.log_fail).exp_m1()
    }

    /// `P(T > k) = (1-p)^k`.
    pub fn survival(&self, k: u64) -> f64 {
        if k == 0 {
            return 1.0;
        }
        (k as f64 * self.log_fail).exp()
    }

    /// Smallest `k` with `P(T <= k) >= q`.
    pub fn quantile(&self, q: f64) -> u64 {
        if q <= 0.0 || self.p >= 1.0 {
            return 1;
        }
        if q >= 1.0 {
            return u64::MAX;
        }
        let k = ((-q).ln_1p() / self.log_fail).ceil();
        (k as u64).max(1)
    }

    pub fn sample(&self, rng: &mut RngStream) -> u64 {
        self.sample_with(rng, GeometricSampling::Inversion)
    }

    pub fn sample_with(&self, rng: &mut RngStream, how: GeometricSampling) -> u64 {
        if self.p >= 1.0 {
            return 1;
        }
        match how {
            GeometricSampling::Inversion => {
                let u = rng.uniform_open0();
                let k = (u.ln() / self.log_fail).ceil();
                if k < 1.0 {
                    1
                } else if k >= u64::MAX as f64 {
                    u64::MAX
                } else {
                    k as u64
                }
            }
            GeometricSampling::Trials => {
                let mut k = 1;
                while rng.uniform() >= self.p {
                    k += 1;
                }
                k
            }
        }
    }
}

/// Exact pmf of `Geom(law.p)` at `k`.
pub fn geometric_pmf(law: &GeometricLaw, k: u64) -> Result<f64> {
    law.pmf(k)
}

pub fn geometric_sample(law: &GeometricLaw, rng: &mut RngStream) -> u64 {
    law.sample(rng)
}

/// `log Vol(unit l2 ball in R^d)`.
pub fn ln_unit_ball_volume(d: usize) -> Result<f64> {
    if d < 1 {
        return domain("dimension must be at least 1");
    }
    let d = d as f64;
    Ok(d * std::f64::consts::LN_2 + d * ln_gamma(1.5) - ln_gamma(1.0 + d / 2.0))
}

/// Volume of the `l2` unit ball in `R^d`.
pub fn unit_ball_volume(d: usize) -> Result<f64> {
    ln_unit_ball_volume(d).map(f64::exp)
}

/// `log(d!)`.
pub fn ln_factorial(d: usize) -> f64 {
    ln_gamma(d as f64 + 1.0)
}

/// Isotropic Gaussian `N(mean, precision^-1 I)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianLaw {
    mean: Vec<f64>,
    precision: f64,
}

impl GaussianLaw {
    pub fn new(mean: Vec<f64>, precision: f64) -> Result<Self> {
        if mean.is_empty() {
            return domain("gaussian mean must have at least one coordinate");
        }
        if !(precision > 0.0 && precision.is_finite()) {
            return domain(format!("precision must be positive and finite, got {precision}"));
        }
        Ok(Self { mean, precision })
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn precision(&self) -> f64 {
        self.precision
    }

    pub fn logpdf(&self, x: &[f64]) -> f64 {
        let d = self.mean.len() as f64;
        let sq: f64 = x
            .iter()
            .zip(&self.mean)
            .map(|(xi, mi)| (xi - mi) * (xi - mi))
            .sum();
        -0.5 * d * (2.0 * std::f64::consts::PI / self.precision).ln() - 0.5 * self.precision * sq
    }

    fn draw_scaled(&self, rng: &mut RngStream, spread: f64) -> Vec<f64> {
        let sd = spread / self.precision.sqrt();
        self.mean
            .iter()
            .map(|m| m + sd * rng.standard_normal())
            .collect()
    }
}

impl LogDensity for GaussianLaw {
    fn dim(&self) -> usize {
        self.mean.len()
    }

    fn log_pdf(&self, x: &[f64]) -> f64 {
        self.logpdf(x)
    }
}

impl Proposal for GaussianLaw {
    fn sample(&self, rng: &mut RngStream) -> Vec<f64> {
        self.draw_scaled(rng, 1.0)
    }

    fn probe(&self, rng: &mut RngStream) -> Vec<f64> {
        let spread = if rng.uniform() < 0.5 { 1.0 } else { 3.0 };
        self.draw_scaled(rng, spread)
    }
}

pub fn gaussian_sample(law: &GaussianLaw, rng: &mut RngStream) -> Vec<f64> {
    law.sample(rng)
}

pub fn gaussian_logpdf(law: &GaussianLaw, x: &[f64]) -> f64 {
    law.logpdf(x)
}

/// Norm defining a K-norm law. Only `l2` is implemented.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    L1,
    L2,
    LInf,
}

/// K-norm law with density `exp(-|x - m|_K / s) / (d! s^d Vol(K))`.
#[derive(Debug, Clone, PartialEq)]
pub struct KNormLaw {
    location: Vec<f64>,
    scale: f64,
    norm: NormKind,
    ln_norm_const: f64,
}

impl KNormLaw {
    pub fn new(location: Vec<f64>, scale: f64, norm: NormKind) -> Result<Self> {
        if location.is_empty() {
            return domain("k-norm location must have at least one coordinate");
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return domain(format!("scale must be positive and finite, got {scale}"));
        }
        if norm != NormKind::L2 {
            return Err(Error::Unsupported(format!("{norm:?} k-norm laws")));
        }
        let d = location.len();
        let ln_norm_const = ln_factorial(d) + d as f64 * scale.ln() + ln_unit_ball_volume(d)?;
        Ok(Self {
            location,
            scale,
            norm,
            ln_norm_const,
        })
    }

    pub fn l2(location: Vec<f64>, scale: f64) -> Result<Self> {
        Self::new(location, scale, NormKind::L2)
    }

    pub fn location(&self) -> &[f64] {
        &self.location
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn norm(&self) -> NormKind {
        self.norm
    }

    /// `log c` with `c = d! s^d Vol(K)`.
    pub fn ln_normalizing_constant(&self) -> f64 {
        self.ln_norm_const
    }

    pub fn logpdf(&self, x: &[f64]) -> f64 {
        let r = l2_distance(x, &self.location);
        -self.ln_norm_const - r / self.scale
    }

    fn draw_scaled(&self, rng: &mut RngStream, scale: f64) -> Vec<f64> {
        let d = self.location.len();
        let radius = Gamma::new(d as f64, scale)
            .expect("shape and scale validated at construction")
            .sample(rng);
        let direction = uniform_direction(d, rng);
        self.location
            .iter()
            .zip(direction)
            .map(|(m, u)| m + radius * u)
            .collect()
    }
}

impl LogDensity for KNormLaw {
    fn dim(&self) -> usize {
        self.location.len()
    }

    fn log_pdf(&self, x: &[f64]) -> f64 {
        self.logpdf(x)
    }
}

impl Proposal for KNormLaw {
    fn sample(&self, rng: &mut RngStream) -> Vec<f64> {
        self.draw_scaled(rng, self.scale)
    }

    fn probe(&self, rng: &mut RngStream) -> Vec<f64> {
        let spread = if rng.uniform() < 0.5 { 1.0 } else { 3.0 };
        self.draw_scaled(rng, spread * self.scale)
    }
}

/// Draws from the l2 K-norm law: uniform direction, `Gamma(d, s)` radius.
pub fn knorm_sample(law: &KNormLaw, rng: &mut RngStream) -> Result<Vec<f64>> {
    if law.norm != NormKind::L2 {
        return Err(Error::Unsupported(format!("{:?} k-norm sampling", law.norm)));
    }
    Ok(law.sample(rng))
}

fn uniform_direction(d: usize, rng: &mut RngStream) -> Vec<f64> {
    if d == 1 {
        return vec![if rng.uniform() < 0.5 { -1.0 } else { 1.0 }];
    }
    loop {
        let z: Vec<f64> = (0..d).map(|_| rng.standard_normal()).collect();
        let n = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 0.0 {
            return z.into_iter().map(|v| v / n).collect();
        }
    }
}

pub(crate) fn l2_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Uniform law on an axis-aligned box.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
    ln_volume: f64,
}

impl UniformBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return domain("box bounds must be non-empty and of equal length");
        }
        if lower.iter().zip(&upper).any(|(a, b)| !(b > a)) {
            return domain("box upper bounds must exceed lower bounds");
        }
        let ln_volume = lower.iter().zip(&upper).map(|(a, b)| (b - a).ln()).sum();
        Ok(Self {
            lower,
            upper,
            ln_volume,
        })
    }

    pub fn unit(d: usize) -> Result<Self> {
        Self::new(vec![0.0; d], vec![1.0; d])
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(v, (a, b))| *v >= *a && *v <= *b)
    }
}

impl LogDensity for UniformBox {
    fn dim(&self) -> usize {
        self.lower.len()
    }

    fn log_pdf(&self, x: &[f64]) -> f64 {
        if self.contains(x) {
            -self.ln_volume
        } else {
            f64::NEG_INFINITY
        }
    }
}

impl Proposal for UniformBox {
    fn sample(&self, rng: &mut RngStream) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(a, b)| a + (b - a) * rng.uniform())
            .collect()
    }
}
