//! Rejection samplers that report their iteration-count runtime.
//!
//! [`simple_reject`] is the classic sampler whose runtime `Geom(p_D)` leaks
//! the data. The other samplers remove that channel:
//!
//! * [`truncated_reject`] always runs a fixed number of iterations.
//! * [`additive_wait_reject`] pads the runtime with a geometric wait so the
//!   total is `Geom(1/c)` for a database-free `c`.
//! * [`squeeze_reject`] publishes only once a proposal falls under the
//!   squeeze `c_L L`, so the runtime is `Geom(c_L / c_U)`.
//!
//! The runtime is the number of proposal iterations. Each iteration draws the
//! proposal point first and the uniform second; all accept tests compare
//! `log Y` against a log-ratio.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::distributions::{GeometricLaw, LogDensity, Proposal, RngStream};
use crate::error::{domain, Error, Result};

/// Additive slack, in log space, tolerated before an envelope counts as violated.
pub const ENVELOPE_SLACK: f64 = 1e-9;

/// Number of probe points used when validating an envelope.
pub const DEFAULT_PROBES: usize = 10_000;

const PROBE_SEED: u64 = 0x5e_ed0f_e4e1_09e5;

/// Where a target puts mass.
#[derive(Debug, Clone, PartialEq)]
pub enum Support {
    All,
    Box { lower: Vec<f64>, upper: Vec<f64> },
}

impl Support {
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Support::All => true,
            Support::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(v, (a, b))| *v >= *a && *v <= *b),
        }
    }
}

type LogFn = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// Unnormalized target `exp(g(x))`.
#[derive(Clone)]
pub struct UnnormalizedTarget {
    log_density: Arc<LogFn>,
    dim: usize,
    support: Support,
}

impl fmt::Debug for UnnormalizedTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UnnormalizedTarget")
            .field("dim", &self.dim)
            .field("support", &self.support)
            .finish_non_exhaustive()
    }
}

impl UnnormalizedTarget {
    pub fn new(dim: usize, log_density: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            log_density: Arc::new(log_density),
            dim,
            support: Support::All,
        }
    }

    pub fn with_support(mut self, support: Support) -> Self {
        self.support = support;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    /// `g(x)`, or `-inf` outside the support.
    pub fn log_density(&self, x: &[f64]) -> f64 {
        if self.support.contains(x) {
            (self.log_density)(x)
        } else {
            f64::NEG_INFINITY
        }
    }

    /// View of the target as a density. Only meaningful when `g` is normalized.
    pub fn as_density(&self) -> TargetDensity {
        TargetDensity(self.clone())
    }
}

/// A normalized target used as a [`LogDensity`] (for instance as a squeeze).
#[derive(Debug, Clone)]
pub struct TargetDensity(UnnormalizedTarget);

impl LogDensity for TargetDensity {
    fn dim(&self) -> usize {
        self.0.dim
    }

    fn log_pdf(&self, x: &[f64]) -> f64 {
        self.0.log_density(x)
    }
}

/// Lower bound `c_L L(x) <= exp(g(x))`, stored through `log(c_L / c_U)` so
/// the ratio stays exact when `c_U` carries database-dependent terms.
#[derive(Clone)]
pub struct Squeeze {
    pub density: Arc<dyn LogDensity>,
    pub log_ratio: f64,
}

/// Proposal `U` with `exp(g) <= c_U U`, optionally with a squeeze.
#[derive(Clone)]
pub struct Envelope {
    proposal: Arc<dyn Proposal>,
    log_cu: f64,
    squeeze: Option<Squeeze>,
}

impl fmt::Debug for Envelope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Envelope")
            .field("log_cu", &self.log_cu)
            .field("log_ratio", &self.squeeze.as_ref().map(|s| s.log_ratio))
            .finish_non_exhaustive()
    }
}

impl Envelope {
    pub fn new(proposal: Arc<dyn Proposal>, log_cu: f64) -> Self {
        Self {
            proposal,
            log_cu,
            squeeze: None,
        }
    }

    pub fn with_squeeze(self, density: Arc<dyn LogDensity>, log_cl: f64) -> Self {
        let log_ratio = log_cl - self.log_cu;
        self.with_squeeze_ratio(density, log_ratio)
    }

    /// Squeeze given by `log(c_L / c_U)` rather than `log c_L`.
    pub fn with_squeeze_ratio(mut self, density: Arc<dyn LogDensity>, log_ratio: f64) -> Self {
        self.squeeze = Some(Squeeze { density, log_ratio });
        self
    }

    pub fn proposal(&self) -> &Arc<dyn Proposal> {
        &self.proposal
    }

    pub fn log_cu(&self) -> f64 {
        self.log_cu
    }

    pub fn squeeze(&self) -> Option<&Squeeze> {
        self.squeeze.as_ref()
    }

    /// `c_L / c_U`, the squeeze sampler's per-iteration publish probability.
    pub fn squeeze_ratio(&self) -> Option<f64> {
        self.squeeze.as_ref().map(|s| s.log_ratio.exp())
    }

    pub fn log_cl(&self) -> Option<f64> {
        self.squeeze.as_ref().map(|s| self.log_cu + s.log_ratio)
    }

    /// Checks the sandwich at `probes` points drawn from the proposal's probe
    /// law and fails hard on the first violation beyond [`ENVELOPE_SLACK`].
    pub fn validate(&self, target: &UnnormalizedTarget, probes: usize) -> Result<()> {
        if self.proposal.dim() != target.dim() {
            return Err(Error::InvalidEnvelope(format!(
                "proposal dimension {} does not match target dimension {}",
                self.proposal.dim(),
                target.dim()
            )));
        }
        let mut rng = RngStream::new(PROBE_SEED, 0);
        for _ in 0..probes {
            let x = self.proposal.probe(&mut rng);
            self.check_point(target, &x)?;
        }
        Ok(())
    }

    pub fn validated(self, target: &UnnormalizedTarget) -> Result<Self> {
        self.validate(target, DEFAULT_PROBES)?;
        Ok(self)
    }

    fn check_point(&self, target: &UnnormalizedTarget, x: &[f64]) -> Result<()> {
        let g = target.log_density(x);
        let upper = self.log_cu + self.proposal.log_pdf(x);
        if g > upper + ENVELOPE_SLACK {
            return Err(Error::InvalidEnvelope(format!(
                "target exceeds c_U U at {x:?}: log target {g}, log bound {upper}"
            )));
        }
        if let Some(s) = &self.squeeze {
            let lower = self.log_cu + s.log_ratio + s.density.log_pdf(x);
            if lower > g + ENVELOPE_SLACK {
                return Err(Error::InvalidEnvelope(format!(
                    "squeeze exceeds target at {x:?}: log squeeze {lower}, log target {g}"
                )));
            }
        }
        Ok(())
    }

    /// `log(exp(g(x)) / (c_U U(x)))`, checked against the upper bound.
    fn log_accept_ratio(&self, target: &UnnormalizedTarget, x: &[f64]) -> Result<f64> {
        let g = target.log_density(x);
        let upper = self.log_cu + self.proposal.log_pdf(x);
        if g > upper + ENVELOPE_SLACK {
            return Err(Error::InvalidEnvelope(format!(
                "target exceeds c_U U during sampling at {x:?}: log target {g}, log bound {upper}"
            )));
        }
        Ok(g - upper)
    }
}

/// One iteration of a sampler.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleEvent {
    pub iter: u64,
    pub x: Vec<f64>,
    pub y: f64,
    pub target_accept: bool,
    pub publish: bool,
}

/// Published value, runtime in iterations, and optional per-iteration log.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleTrace {
    pub value: Vec<f64>,
    pub runtime: u64,
    pub accepted: bool,
    pub events: Option<Vec<SampleEvent>>,
}

impl SampleTrace {
    /// Event log as JSON lines: `{iter, x, y, target_accept, publish}` per line.
    pub fn events_jsonl(&self) -> String {
        let mut out = String::new();
        for e in self.events.iter().flatten() {
            out.push_str(&serde_json::to_string(e).expect("events serialize"));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SamplerOptions {
    pub record_events: bool,
}

impl SamplerOptions {
    pub fn recording() -> Self {
        Self {
            record_events: true,
        }
    }
}

struct Log(Option<Vec<SampleEvent>>);

impl Log {
    fn new(opts: SamplerOptions) -> Self {
        Log(opts.record_events.then(Vec::new))
    }

    fn push(&mut self, iter: u64, x: &[f64], y: f64, target_accept: bool, publish: bool) {
        if let Some(v) = self.0.as_mut() {
            v.push(SampleEvent {
                iter,
                x: x.to_vec(),
                y,
                target_accept,
                publish,
            });
        }
    }
}

fn check_dims(target: &UnnormalizedTarget, env: &Envelope) -> Result<()> {
    if env.proposal.dim() != target.dim() {
        return Err(Error::InvalidEnvelope(format!(
            "proposal dimension {} does not match target dimension {}",
            env.proposal.dim(),
            target.dim()
        )));
    }
    Ok(())
}

/// Plain rejection sampling; runtime `Geom(int exp(g) / c_U)`.
pub fn simple_reject(target: &UnnormalizedTarget, env: &Envelope, rng: &mut RngStream) -> Result<SampleTrace> {
    simple_reject_with(target, env, rng, SamplerOptions::default())
}

pub fn simple_reject_with(
    target: &UnnormalizedTarget,
    env: &Envelope,
    rng: &mut RngStream,
    opts: SamplerOptions,
) -> Result<SampleTrace> {
    check_dims(target, env)?;
    let mut log = Log::new(opts);
    let mut iter = 0u64;
    loop {
        iter += 1;
        let x = env.proposal.sample(rng);
        let y = rng.uniform();
        let accept = y.ln() <= env.log_accept_ratio(target, &x)?;
        log.push(iter, &x, y, accept, accept);
        if accept {
            return Ok(SampleTrace {
                value: x,
                runtime: iter,
                accepted: true,
                events: log.0,
            });
        }
    }
}

/// `ceil(log(1/delta) / log(1/(1 - alpha0)))`, the smallest `N` with `(1 - alpha0)^N <= delta`.
pub fn truncation_length(alpha0: f64, delta: f64) -> Result<u64> {
    if !(alpha0 > 0.0 && alpha0 < 1.0) {
        return domain(format!("alpha0 must lie in (0, 1), got {alpha0}"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return domain(format!("delta must lie in (0, 1), got {delta}"));
    }
    let log_fail = (-alpha0).ln_1p();
    let log_delta = delta.ln();
    let mut n = (log_delta / log_fail).ceil().max(1.0) as u64;
    while n > 1 && (n - 1) as f64 * log_fail <= log_delta {
        n -= 1;
    }
    while (n as f64) * log_fail > log_delta {
        n += 1;
    }
    Ok(n)
}

/// Runs exactly `N = truncation_length(alpha0, delta)` iterations and
/// publishes the first accepted proposal. When nothing is accepted the
/// output is one extra proposal draw and `accepted` is false.
pub fn truncated_reject(
    target: &UnnormalizedTarget,
    env: &Envelope,
    alpha0: f64,
    delta: f64,
    rng: &mut RngStream,
) -> Result<SampleTrace> {
    truncated_reject_with(target, env, alpha0, delta, rng, SamplerOptions::default())
}

pub fn truncated_reject_with(
    target: &UnnormalizedTarget,
    env: &Envelope,
    alpha0: f64,
    delta: f64,
    rng: &mut RngStream,
    opts: SamplerOptions,
) -> Result<SampleTrace> {
    check_dims(target, env)?;
    let n = truncation_length(alpha0, delta)?;
    let mut log = Log::new(opts);
    let mut first: Option<Vec<f64>> = None;
    for iter in 1..=n {
        let x = env.proposal.sample(rng);
        let y = rng.uniform();
        let accept = y.ln() <= env.log_accept_ratio(target, &x)?;
        let publish = accept && first.is_none();
        log.push(iter, &x, y, accept, publish);
        if publish {
            first = Some(x);
        }
    }
    let (value, accepted) = match first {
        Some(x) => (x, true),
        None => (env.proposal.sample(rng), false),
    };
    Ok(SampleTrace {
        value,
        runtime: n,
        accepted,
        events: log.0,
    })
}

/// How the additive wait is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WaitMode {
    /// Run to acceptance, then with probability `1 - c_D/c` add a `Geom(1/c)` wait.
    #[default]
    Memoryless,
    /// Report each accepted proposal with probability `c_D/c`, otherwise keep going.
    Thinning,
}

/// Exact sampler whose runtime is `Geom(1/c)` whatever the database.
///
/// The target must be normalized with `pi <= c_D U`; `c >= sup_D c_D` is the
/// caller's database-free bound.
pub fn additive_wait_reject(
    target: &UnnormalizedTarget,
    env: &Envelope,
    cd: f64,
    c: f64,
    rng: &mut RngStream,
) -> Result<SampleTrace> {
    additive_wait_reject_with(target, env, cd, c, WaitMode::Memoryless, rng, SamplerOptions::default())
}

pub fn additive_wait_reject_with(
    target: &UnnormalizedTarget,
    env: &Envelope,
    cd: f64,
    c: f64,
    mode: WaitMode,
    rng: &mut RngStream,
    opts: SamplerOptions,
) -> Result<SampleTrace> {
    check_dims(target, env)?;
    if !(cd >= 1.0 && cd.is_finite()) {
        return domain(format!("c_D must be a finite value >= 1, got {cd}"));
    }
    if !(c >= cd && c.is_finite()) {
        return domain(format!("c = {c} must be at least c_D = {cd}"));
    }
    if env.log_cu > cd.ln() + ENVELOPE_SLACK {
        return Err(Error::InvalidEnvelope(format!(
            "c_D = {cd} is smaller than the envelope constant {}",
            env.log_cu.exp()
        )));
    }
    // the acceptance loop runs against c_D U
    let loop_env = Envelope {
        proposal: env.proposal.clone(),
        log_cu: cd.ln(),
        squeeze: None,
    };
    let keep = cd / c;
    match mode {
        WaitMode::Memoryless => {
            let mut trace = simple_reject_with(target, &loop_env, rng, opts)?;
            let y = rng.uniform();
            if y >= keep {
                let wait = GeometricLaw::new(1.0 / c)?.sample(rng);
                trace.runtime += wait;
            }
            Ok(trace)
        }
        WaitMode::Thinning => {
            let mut log = Log::new(opts);
            let mut iter = 0u64;
            loop {
                iter += 1;
                let x = loop_env.proposal.sample(rng);
                let y = rng.uniform();
                let accept = y.ln() <= loop_env.log_accept_ratio(target, &x)?;
                let publish = accept && rng.uniform() < keep;
                log.push(iter, &x, y, accept, publish);
                if publish {
                    return Ok(SampleTrace {
                        value: x,
                        runtime: iter,
                        accepted: true,
                        events: log.0,
                    });
                }
            }
        }
    }
}

/// Squeeze-gated rejection sampling; runtime `Geom(c_L / c_U)`.
///
/// One uniform `Y` per iteration is compared with both thresholds. The first
/// proposal that clears the target threshold becomes the candidate; the
/// candidate is published on the first iteration whose `Y` also clears the
/// squeeze threshold.
pub fn squeeze_reject(target: &UnnormalizedTarget, env: &Envelope, rng: &mut RngStream) -> Result<SampleTrace> {
    squeeze_reject_with(target, env, rng, SamplerOptions::default())
}

pub fn squeeze_reject_with(
    target: &UnnormalizedTarget,
    env: &Envelope,
    rng: &mut RngStream,
    opts: SamplerOptions,
) -> Result<SampleTrace> {
    check_dims(target, env)?;
    let proposal = env.proposal.clone();
    squeeze_core(target, env, opts, || {
        let x = proposal.sample(rng);
        let y = rng.uniform();
        Some((x, y))
    })
}

/// Runs the squeeze sampler on a fixed script of `(x, y)` draws.
///
/// Fails with an invariant error when the script ends before a publish.
pub fn squeeze_reject_scripted(
    target: &UnnormalizedTarget,
    env: &Envelope,
    draws: impl IntoIterator<Item = (Vec<f64>, f64)>,
    opts: SamplerOptions,
) -> Result<SampleTrace> {
    let mut it = draws.into_iter();
    squeeze_core(target, env, opts, || it.next())
}

fn squeeze_core(
    target: &UnnormalizedTarget,
    env: &Envelope,
    opts: SamplerOptions,
    mut draw: impl FnMut() -> Option<(Vec<f64>, f64)>,
) -> Result<SampleTrace> {
    let squeeze = env
        .squeeze
        .as_ref()
        .ok_or_else(|| Error::InvalidEnvelope("squeeze sampler needs a squeeze density".into()))?;
    let mut log = Log::new(opts);
    let mut candidate: Option<Vec<f64>> = None;
    let mut iter = 0u64;
    loop {
        let Some((x, y)) = draw() else {
            return Err(Error::Invariant(format!(
                "draw script exhausted after {iter} iterations without a publish"
            )));
        };
        iter += 1;
        let log_y = y.ln();
        let log_u = env.proposal.log_pdf(&x);
        let g = target.log_density(&x);
        let upper = env.log_cu + log_u;
        if g > upper + ENVELOPE_SLACK {
            return Err(Error::InvalidEnvelope(format!(
                "target exceeds c_U U during sampling at {x:?}: log target {g}, log bound {upper}"
            )));
        }
        let log_l = squeeze.density.log_pdf(&x);
        let lower = env.log_cu + squeeze.log_ratio + log_l;
        if lower > g + ENVELOPE_SLACK {
            return Err(Error::InvalidEnvelope(format!(
                "squeeze exceeds target during sampling at {x:?}: log squeeze {lower}, log target {g}"
            )));
        }
        let target_accept = log_y <= g - upper;
        if target_accept && candidate.is_none() {
            candidate = Some(x.clone());
        }
        let publish = log_y <= squeeze.log_ratio + log_l - log_u;
        log.push(iter, &x, y, target_accept, publish);
        if publish {
            let value = candidate.ok_or_else(|| {
                Error::Invariant(format!("publish at iteration {iter} without an accepted candidate"))
            })?;
            return Ok(SampleTrace {
                value,
                runtime: iter,
                accepted: true,
                events: log.0,
            });
        }
    }
}

/// Squeeze sampler with `L = pi` and `c_L = c_U / c`; runtime `Geom(1/c)`.
///
/// The target must be normalized and `c >= c_U`.
pub fn squeeze_from_known_constant(
    target: &UnnormalizedTarget,
    env: &Envelope,
    c: f64,
    rng: &mut RngStream,
) -> Result<SampleTrace> {
    let env = known_constant_envelope(target, env, c)?;
    squeeze_reject(target, &env, rng)
}

/// The envelope used by [`squeeze_from_known_constant`].
pub fn known_constant_envelope(target: &UnnormalizedTarget, env: &Envelope, c: f64) -> Result<Envelope> {
    if !(c > 0.0 && c.is_finite()) || c.ln() < env.log_cu - ENVELOPE_SLACK {
        return domain(format!("c = {c} must be at least c_U = {}", env.log_cu.exp()));
    }
    Ok(Envelope {
        proposal: env.proposal.clone(),
        log_cu: env.log_cu,
        squeeze: None,
    }
    .with_squeeze_ratio(Arc::new(target.as_density()), -c.ln()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::GaussianLaw;

    fn std_normal_target() -> UnnormalizedTarget {
        let g = GaussianLaw::new(vec![0.0], 1.0).unwrap();
        UnnormalizedTarget::new(1, move |x| g.logpdf(x))
    }

    #[test]
    fn target_equal_to_proposal_accepts_immediately() {
        let target = std_normal_target();
        let env = Envelope::new(Arc::new(GaussianLaw::new(vec![0.0], 1.0).unwrap()), 0.0);
        let mut rng = RngStream::new(1, 0);
        for _ in 0..200 {
            assert_eq!(simple_reject(&target, &env, &mut rng).unwrap().runtime, 1);
        }
    }

    #[test]
    fn detects_envelope_violation() {
        let target = std_normal_target();
        // proposal narrower than the target: fails in the tails
        let env = Envelope::new(Arc::new(GaussianLaw::new(vec![0.0], 4.0).unwrap()), 0.0);
        assert!(matches!(env.validate(&target, 1000), Err(Error::InvalidEnvelope(_))));
        let mut rng = RngStream::new(2, 0);
        let mut hit = false;
        for _ in 0..500 {
            if let Err(Error::InvalidEnvelope(_)) = simple_reject(&target, &env, &mut rng) {
                hit = true;
                break;
            }
        }
        assert!(hit);
    }

    #[test]
    fn truncation_lengths() {
        assert_eq!(truncation_length(0.1, 0.001).unwrap(), 66);
        assert_eq!(truncation_length(0.5, 0.5).unwrap(), 1);
        assert_eq!(truncation_length(0.5, 0.25).unwrap(), 2);
        assert!(truncation_length(0.0, 0.1).is_err());
        assert!(truncation_length(1.0, 0.1).is_err());
        assert!(truncation_length(0.3, 1.0).is_err());
    }

    #[test]
    fn truncated_runtime_is_constant() {
        let target = std_normal_target();
        let env = Envelope::new(Arc::new(GaussianLaw::new(vec![0.0], 0.25).unwrap()), 2f64.ln());
        let mut rng = RngStream::new(3, 0);
        for _ in 0..100 {
            let t = truncated_reject(&target, &env, 0.5, 0.01, &mut rng).unwrap();
            assert_eq!(t.runtime, 7);
        }
    }

    #[test]
    fn wait_rejects_small_c() {
        let target = std_normal_target();
        let env = Envelope::new(Arc::new(GaussianLaw::new(vec![0.0], 0.25).unwrap()), 2f64.ln());
        let mut rng = RngStream::new(3, 0);
        assert!(matches!(
            additive_wait_reject(&target, &env, 2.0, 1.5, &mut rng),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            additive_wait_reject(&target, &env, 1.5, 3.0, &mut rng),
            Err(Error::InvalidEnvelope(_))
        ));
    }

    #[test]
    fn wait_with_c_equal_cd_adds_nothing() {
        let target = std_normal_target();
        let env = Envelope::new(Arc::new(GaussianLaw::new(vec![0.0], 1.0).unwrap()), 0.0);
        let mut rng = RngStream::new(4, 0);
        for _ in 0..100 {
            let t = additive_wait_reject(&target, &env, 1.0, 1.0, &mut rng).unwrap();
            assert_eq!(t.runtime, 1);
        }
    }

    #[test]
    fn squeeze_needs_squeeze() {
        let target = std_normal_target();
        let env = Envelope::new(Arc::new(GaussianLaw::new(vec![0.0], 1.0).unwrap()), 0.0);
        let mut rng = RngStream::new(5, 0);
        assert!(matches!(squeeze_reject(&target, &env, &mut rng), Err(Error::InvalidEnvelope(_))));
    }

    #[test]
    fn degenerate_squeeze_publishes_first_iteration() {
        let target = std_normal_target();
        let g: Arc<GaussianLaw> = Arc::new(GaussianLaw::new(vec![0.0], 1.0).unwrap());
        let env = Envelope::new(g.clone(), 0.0).with_squeeze(g, 0.0);
        let mut rng = RngStream::new(6, 0);
        for _ in 0..100 {
            let t = squeeze_reject_with(&target, &env, &mut rng, SamplerOptions::recording()).unwrap();
            assert_eq!(t.runtime, 1);
            let ev = t.events.unwrap();
            assert!(ev[0].target_accept && ev[0].publish);
        }
    }

    #[test]
    fn known_constant_rejects_small_c() {
        let target = std_normal_target();
        let env = Envelope::new(Arc::new(GaussianLaw::new(vec![0.0], 0.25).unwrap()), 2f64.ln());
        let mut rng = RngStream::new(7, 0);
        assert!(squeeze_from_known_constant(&target, &env, 1.5, &mut rng).is_err());
        assert!(squeeze_from_known_constant(&target, &env, 2.0, &mut rng).is_ok());
    }

    #[test]
    fn events_serialize_as_jsonl() {
        let target = std_normal_target();
        let env = Envelope::new(Arc::new(GaussianLaw::new(vec![0.0], 0.25).unwrap()), 2f64.ln());
        let mut rng = RngStream::new(8, 0);
        let t = simple_reject_with(&target, &env, &mut rng, SamplerOptions::recording()).unwrap();
        let text = t.events_jsonl();
        assert_eq!(text.lines().count() as u64, t.runtime);
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        for key in ["iter", "x", "y", "target_accept", "publish"] {
            assert!(first.get(key).is_some(), "missing {key}");
        }
    }
}
