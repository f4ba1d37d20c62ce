//! Runs a named sampler many times on a prepared target.

use serde::{Deserialize, Serialize};

use super::targets::Prepared;
use super::{fmt_float, replicate};
use crate::adaptive::{adaptive_sample_with, AdaptiveOptions, GridLayout, Schedule};
use crate::distributions::RngStream;
use crate::error::{Error, Result};
use crate::samplers::{
    additive_wait_reject_with, simple_reject, squeeze_reject, truncated_reject, Envelope, SamplerOptions,
    UnnormalizedTarget, WaitMode,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerKind {
    Simple,
    Truncated,
    Wait,
    Squeeze,
    Adaptive,
}

/// Sampler-specific settings; unused fields are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplerParams {
    /// Failure probability of the truncated sampler.
    pub delta: f64,
    /// Acceptance lower bound for the truncated sampler; defaults to `c_L / c_U`.
    pub alpha0: Option<f64>,
    /// Database-free wait constant; defaults to `c_U / c_L`.
    pub c: Option<f64>,
    pub wait_mode: WaitModeName,
    pub schedule: Schedule,
    pub layout: GridLayout,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WaitModeName {
    #[default]
    Memoryless,
    Thinning,
}

impl From<WaitModeName> for WaitMode {
    fn from(w: WaitModeName) -> Self {
        match w {
            WaitModeName::Memoryless => WaitMode::Memoryless,
            WaitModeName::Thinning => WaitMode::Thinning,
        }
    }
}

impl Default for SamplerParams {
    fn default() -> Self {
        Self {
            delta: 1e-3,
            alpha0: None,
            c: None,
            wait_mode: WaitModeName::Memoryless,
            schedule: Schedule::doubling(4),
            layout: GridLayout::CellCenter,
        }
    }
}

/// One published value.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRow {
    pub value: Vec<f64>,
    pub runtime: u64,
    pub accepted: bool,
}

/// Normalized target and envelope with `c_U` replaced by `c_D = c_U / Z`.
pub fn normalized(prep: &Prepared) -> Result<(UnnormalizedTarget, Envelope)> {
    let log_z = prep
        .log_normalizer
        .ok_or_else(|| Error::Unsupported("the wait sampler needs a target with a known normalizer".into()))?;
    let t = prep.target.clone();
    let target = UnnormalizedTarget::new(t.dim(), move |x| t.log_density(x) - log_z)
        .with_support(prep.target.support().clone());
    let env = Envelope::new(prep.envelope.proposal().clone(), prep.envelope.log_cu() - log_z);
    Ok((target, env))
}

/// `n` independent runs (one adaptive stream of `n` publishes for `Adaptive`).
pub fn run_sampler(prep: &Prepared, kind: SamplerKind, params: &SamplerParams, n: usize, seed: u64) -> Result<Vec<SampleRow>> {
    let row = |t: crate::samplers::SampleTrace| SampleRow {
        value: t.value,
        runtime: t.runtime,
        accepted: t.accepted,
    };
    match kind {
        SamplerKind::Simple => replicate(seed, n, |rng| simple_reject(&prep.target, &prep.envelope, rng).map(row)),
        SamplerKind::Squeeze => replicate(seed, n, |rng| squeeze_reject(&prep.target, &prep.envelope, rng).map(row)),
        SamplerKind::Truncated => {
            let alpha0 = match params.alpha0 {
                Some(a) => a,
                None => prep.squeeze_ratio()?,
            };
            replicate(seed, n, |rng| {
                truncated_reject(&prep.target, &prep.envelope, alpha0, params.delta, rng).map(row)
            })
        }
        SamplerKind::Wait => {
            let (target, env) = normalized(prep)?;
            let cd = env.log_cu().exp();
            let c = match params.c {
                Some(c) => c,
                None => 1.0 / prep.squeeze_ratio()?,
            };
            let mode = params.wait_mode.into();
            replicate(seed, n, |rng| {
                additive_wait_reject_with(&target, &env, cd, c, mode, rng, SamplerOptions::default()).map(row)
            })
        }
        SamplerKind::Adaptive => {
            let holder = prep
                .holder
                .as_ref()
                .ok_or_else(|| Error::Unsupported("the adaptive sampler needs a log-Hölder target".into()))?;
            let opts = AdaptiveOptions {
                layout: params.layout,
                ..AdaptiveOptions::default()
            };
            let mut rng = RngStream::new(seed, 0);
            let run = adaptive_sample_with(holder, n, &params.schedule, opts, &mut rng)?;
            Ok(run
                .samples
                .into_iter()
                .zip(run.runtimes)
                .map(|(value, runtime)| SampleRow {
                    value,
                    runtime,
                    accepted: true,
                })
                .collect())
        }
    }
}

/// `index,x0,...,runtime,accepted` CSV.
pub fn rows_csv(rows: &[SampleRow]) -> String {
    let d = rows.first().map(|r| r.value.len()).unwrap_or(0);
    let mut out = String::from("index");
    for i in 0..d {
        out.push_str(&format!(",x{i}"));
    }
    out.push_str(",runtime,accepted\n");
    for (i, r) in rows.iter().enumerate() {
        out.push_str(&i.to_string());
        for v in &r.value {
            out.push(',');
            out.push_str(&fmt_float(*v));
        }
        out.push_str(&format!(",{},{}\n", r.runtime, r.accepted));
    }
    out
}
