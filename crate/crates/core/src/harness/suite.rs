//! The `verify` suite: seven statistical checks at level 1e-3 plus exact ones.

use serde::{Deserialize, Serialize};

use super::runner::{run_sampler, SampleRow, SamplerKind, SamplerParams};
use super::targets::{example4_target, ridge_demo_spec, BuiltinTarget, Prepared};
use super::{certify_independence, certify_runtime_law, reproduce_table1, replicate, stats, TestReport, TEST_LEVEL};
use crate::adaptive::{AdaptiveOptions, AdaptiveSampler, Schedule};
use crate::distributions::{geometric_sample, GeometricLaw, RngStream};
use crate::error::{Error, Result};
use crate::samplers::truncation_length;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// 10^4 draws per check.
    Quick,
    /// 10^5 draws per check.
    Full,
}

impl Suite {
    pub fn size(self) -> usize {
        match self {
            Suite::Quick => 10_000,
            Suite::Full => 100_000,
        }
    }
}

fn sub_seed(seed: u64, idx: u64) -> u64 {
    seed.wrapping_add(idx.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn runtimes(rows: &[SampleRow]) -> Vec<u64> {
    rows.iter().map(|r| r.runtime).collect()
}

/// pmf of `T + B W` with `T ~ Geom(q)`, `B ~ Bernoulli(1 - p/q)` and
/// `W ~ Geom(p)`, for `k = 1..=kmax`.
pub fn memoryless_convolution(p: f64, q: f64, kmax: u64) -> Result<Vec<f64>> {
    if !(p <= q) {
        return Err(Error::Domain(format!("need p <= q, got p = {p}, q = {q}")));
    }
    let t = GeometricLaw::new(q)?;
    let w = GeometricLaw::new(p)?;
    let keep = p / q;
    (1..=kmax)
        .map(|k| {
            let mut total = t.pmf(k)? * keep;
            for j in 1..k {
                total += t.pmf(j)? * (1.0 - keep) * w.pmf(k - j)?;
            }
            Ok(total)
        })
        .collect()
}

/// Runs every check of the suite with sub-seeds of `seed`.
pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<TestReport>> {
    let n = suite.size();
    let params = SamplerParams::default();
    let mut out = Vec::new();

    let s = sub_seed(seed, 1);
    let law = GeometricLaw::new(0.25)?;
    let draws = replicate(s, n, |rng| Ok(geometric_sample(&law, rng)))?;
    out.push(certify_runtime_law(&draws, 0.25)?.named("geometric_sampler_law").with_seed(s));

    let gauss = BuiltinTarget::GaussianDemo.prepare()?;
    let s = sub_seed(seed, 2);
    let rows = run_sampler(&gauss, SamplerKind::Squeeze, &params, n, s)?;
    out.push(certify_runtime_law(&runtimes(&rows), 0.5)?.named("squeeze_gaussian_runtime").with_seed(s));
    let xs: Vec<f64> = rows.iter().map(|r| r.value[0]).collect();
    let (d, pv) = stats::ks_one_sample(&xs, |x| stats::normal_cdf(x * std::f64::consts::SQRT_2));
    out.push(TestReport::at_most("squeeze_gaussian_output_ks", d, ks_critical(n), Some(pv), n).with_seed(s));

    let s = sub_seed(seed, 3);
    let rows = run_sampler(&gauss, SamplerKind::Wait, &params, n, s)?;
    out.push(certify_runtime_law(&runtimes(&rows), 0.5)?.named("wait_gaussian_runtime").with_seed(s));

    let kng = BuiltinTarget::KngDemo.prepare()?;
    let s = sub_seed(seed, 4);
    let rows = run_sampler(&kng, SamplerKind::Squeeze, &params, n, s)?;
    out.push(certify_runtime_law(&runtimes(&rows), kng.squeeze_ratio()?)?.named("squeeze_kng_runtime").with_seed(s));

    let s = sub_seed(seed, 5);
    let a = Prepared::from_erm(&ridge_demo_spec(false))?;
    let b = Prepared::from_erm(&ridge_demo_spec(true))?;
    let ra = run_sampler(&a, SamplerKind::Squeeze, &params, n, s)?;
    let rb = run_sampler(&b, SamplerKind::Squeeze, &params, n, sub_seed(s, 1))?;
    out.push(certify_independence(&runtimes(&ra), &runtimes(&rb))?.named("ridge_adjacent_runtime").with_seed(s));

    let s = sub_seed(seed, 6);
    let tp = SamplerParams {
        alpha0: Some(0.5),
        delta: 1e-3,
        ..params.clone()
    };
    let expected = truncation_length(0.5, 1e-3)?;
    let rows = run_sampler(&gauss, SamplerKind::Truncated, &tp, n, s)?;
    let off = rows.iter().filter(|r| r.runtime != expected).count();
    out.push(TestReport::at_most("truncated_constant_runtime", off as f64, 0.0, None, n).with_seed(s));

    let s = sub_seed(seed, 7);
    out.push(adaptive_publish_check(15, n as u64, s)?);

    let worst = reproduce_table1()
        .iter()
        .zip(TABLE1_PUBLISHED)
        .map(|(row, e)| (row.eps - e).abs())
        .fold(0.0, f64::max);
    out.push(TestReport::at_most("table1_eps_of_delta", worst, 0.005, None, 12));

    let conv = memoryless_convolution(0.2, 0.5, 100)?;
    let geo = GeometricLaw::new(0.2)?;
    let worst = conv
        .iter()
        .enumerate()
        .map(|(i, v)| (v - geo.pmf(i as u64 + 1).expect("k >= 1")).abs())
        .fold(0.0, f64::max);
    out.push(TestReport::at_most("memoryless_convolution", worst, 1e-12, None, 100));

    Ok(out)
}

/// Published `eps(delta)` values, `R = 2` then `R = 1.1`, `delta = 1e-1 ... 1e-6`.
pub const TABLE1_PUBLISHED: [f64; 12] = [0.916, 3.22, 5.52, 7.82, 10.13, 12.43, 0.0, 0.125, 0.356, 0.59, 0.82, 1.05];

/// KS critical value at [`TEST_LEVEL`] for `n` samples.
pub fn ks_critical(n: usize) -> f64 {
    // kolmogorov_sf(1.94947) = 1e-3
    let sn = (n as f64).sqrt();
    1.949_47 / (sn + 0.12 + 0.11 / sn)
}

/// Binomial z-test of the publish frequency at fixed resolution `m` on the
/// example target against `exp(-2 r̂)`.
pub fn adaptive_publish_check(m: usize, iterations: u64, seed: u64) -> Result<TestReport> {
    let target = example4_target()?;
    let schedule = Schedule::Fixed { m };
    let mut sampler = AdaptiveSampler::new(&target, &schedule, AdaptiveOptions::default());
    let mut rng = RngStream::new(seed, 0);
    let mut publishes = 0u64;
    for _ in 0..iterations {
        if sampler.step(&mut rng)?.published.is_some() {
            publishes += 1;
        }
    }
    let p = sampler.grid().expect("grid built").publish_probability();
    let nf = iterations as f64;
    let z = (publishes as f64 - nf * p) / (nf * p * (1.0 - p)).sqrt();
    let pvalue = statrs::function::erf::erfc(z.abs() / std::f64::consts::SQRT_2);
    let crit = 3.290_526_731_491_926; // two-sided 1e-3
    debug_assert!((statrs::function::erf::erfc(crit / std::f64::consts::SQRT_2) - TEST_LEVEL).abs() < 1e-9);
    Ok(TestReport::at_most(format!("adaptive_publish_frequency_m{m}"), z.abs(), crit, Some(pvalue), iterations as usize)
        .with_seed(seed))
}
