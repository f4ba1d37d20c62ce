//! Exponential-mechanism targets that come with constant-ratio envelopes.
//!
//! * [`StronglyConcaveTarget`]: Gaussian proposal and squeeze centred at the
//!   mode, ratio `(alpha/L)^(d/2)`.
//! * [`KngTarget`]: `exp(-||grad g||_2)` with K-norm proposal and squeeze,
//!   ratio `(alpha/L)^d`.
//! * [`ErmSpec`]: regularized empirical risk scaled by `eps / (2 Delta)`.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::distributions::{ln_factorial, ln_unit_ball_volume, GaussianLaw, KNormLaw, RngStream};
use crate::error::{domain, Error, Result};
use crate::samplers::{Envelope, UnnormalizedTarget, DEFAULT_PROBES};

/// Tolerance on the finite-difference gradient at a declared mode.
pub const MODE_GRADIENT_TOL: f64 = 1e-4;

/// Gradient-norm tolerance the ERM optimizer must reach.
pub const OPTIMIZER_TOL: f64 = 1e-8;

/// Fixed iteration count of the ERM optimizer.
pub const OPTIMIZER_ITERATIONS: usize = 20_000;

type LogFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type GradFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn central_gradient(f: &LogFn, x: &[f64]) -> Vec<f64> {
    let mut y = x.to_vec();
    (0..x.len())
        .map(|i| {
            let h = 1e-5 * x[i].abs().max(1.0);
            y[i] = x[i] + h;
            let up = f(&y);
            y[i] = x[i] - h;
            let down = f(&y);
            y[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

fn check_constants(alpha: f64, l_smooth: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return domain(format!("strong concavity constant must be positive, got {alpha}"));
    }
    if !(l_smooth >= alpha && l_smooth.is_finite()) {
        return domain(format!("smoothness constant {l_smooth} must be at least alpha = {alpha}"));
    }
    Ok(())
}

fn as_structure(e: Error) -> Error {
    match e {
        Error::InvalidEnvelope(msg) => Error::InvalidStructure(format!("declared constants do not hold: {msg}")),
        other => other,
    }
}

/// Log-density `g` that is `alpha`-strongly concave and `L`-smooth, with mode `x*`.
#[derive(Clone)]
pub struct StronglyConcaveTarget {
    g: Arc<LogFn>,
    alpha: f64,
    l_smooth: f64,
    x_star: Vec<f64>,
    g_at_mode: f64,
}

impl fmt::Debug for StronglyConcaveTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StronglyConcaveTarget")
            .field("alpha", &self.alpha)
            .field("l_smooth", &self.l_smooth)
            .field("x_star", &self.x_star)
            .field("g_at_mode", &self.g_at_mode)
            .finish_non_exhaustive()
    }
}

impl StronglyConcaveTarget {
    /// Checks that the finite-difference gradient vanishes at `x_star`.
    pub fn new(
        alpha: f64,
        l_smooth: f64,
        x_star: Vec<f64>,
        g: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        check_constants(alpha, l_smooth)?;
        if x_star.is_empty() {
            return domain("mode must have at least one coordinate");
        }
        let g: Arc<LogFn> = Arc::new(g);
        let grad = central_gradient(g.as_ref(), &x_star);
        let gn = norm2(&grad);
        if !(gn < MODE_GRADIENT_TOL) {
            return Err(Error::InvalidStructure(format!(
                "gradient norm {gn:e} at the declared mode exceeds {MODE_GRADIENT_TOL:e}"
            )));
        }
        let g_at_mode = g(&x_star);
        Ok(Self {
            g,
            alpha,
            l_smooth,
            x_star,
            g_at_mode,
        })
    }

    pub fn dim(&self) -> usize {
        self.x_star.len()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn l_smooth(&self) -> f64 {
        self.l_smooth
    }

    pub fn mode(&self) -> &[f64] {
        &self.x_star
    }

    pub fn g_at_mode(&self) -> f64 {
        self.g_at_mode
    }

    pub fn log_density(&self, x: &[f64]) -> f64 {
        (self.g)(x)
    }

    /// `(alpha/L)^(d/2)`.
    pub fn envelope_ratio(&self) -> f64 {
        (self.alpha / self.l_smooth).powf(self.dim() as f64 / 2.0)
    }

    pub fn target(&self) -> UnnormalizedTarget {
        let g = self.g.clone();
        UnnormalizedTarget::new(self.dim(), move |x| g(x))
    }
}

/// Gaussian sandwich `N(x*, 1/L)` below and `N(x*, 1/alpha)` above, probed for validity.
pub fn gaussian_envelope(t: &StronglyConcaveTarget) -> Result<Envelope> {
    let d = t.dim() as f64;
    let tau = 2.0 * std::f64::consts::PI;
    let upper = GaussianLaw::new(t.x_star.clone(), t.alpha)?;
    let lower = GaussianLaw::new(t.x_star.clone(), t.l_smooth)?;
    let log_cu = t.g_at_mode + 0.5 * d * (tau / t.alpha).ln();
    let log_ratio = 0.5 * d * (t.alpha / t.l_smooth).ln();
    let env = Envelope::new(Arc::new(upper), log_cu).with_squeeze_ratio(Arc::new(lower), log_ratio);
    env.validate(&t.target(), DEFAULT_PROBES).map_err(as_structure)?;
    Ok(env)
}

/// KNG target `exp(-||grad g(x)||_2)` for an objective with
/// `alpha ||x - x*|| <= ||grad g(x)|| <= L ||x - x*||`.
#[derive(Clone)]
pub struct KngTarget {
    grad: Arc<GradFn>,
    alpha: f64,
    l_smooth: f64,
    x_star: Vec<f64>,
}

impl fmt::Debug for KngTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KngTarget")
            .field("alpha", &self.alpha)
            .field("l_smooth", &self.l_smooth)
            .field("x_star", &self.x_star)
            .finish_non_exhaustive()
    }
}

impl KngTarget {
    pub fn new(
        alpha: f64,
        l_smooth: f64,
        x_star: Vec<f64>,
        grad: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Result<Self> {
        check_constants(alpha, l_smooth)?;
        if x_star.is_empty() {
            return domain("minimizer must have at least one coordinate");
        }
        let grad: Arc<GradFn> = Arc::new(grad);
        let at = grad(&x_star);
        if at.len() != x_star.len() {
            return domain(format!(
                "gradient has {} coordinates, minimizer has {}",
                at.len(),
                x_star.len()
            ));
        }
        let gn = norm2(&at);
        if !(gn < MODE_GRADIENT_TOL) {
            return Err(Error::InvalidStructure(format!(
                "gradient norm {gn:e} at the declared minimizer exceeds {MODE_GRADIENT_TOL:e}"
            )));
        }
        Ok(Self {
            grad,
            alpha,
            l_smooth,
            x_star,
        })
    }

    pub fn dim(&self) -> usize {
        self.x_star.len()
    }

    pub fn minimizer(&self) -> &[f64] {
        &self.x_star
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (self.grad)(x)
    }

    pub fn log_density(&self, x: &[f64]) -> f64 {
        -norm2(&(self.grad)(x))
    }

    /// `(alpha/L)^d`.
    pub fn envelope_ratio(&self) -> f64 {
        (self.alpha / self.l_smooth).powi(self.dim() as i32)
    }

    pub fn target(&self) -> UnnormalizedTarget {
        let grad = self.grad.clone();
        UnnormalizedTarget::new(self.dim(), move |x| -norm2(&grad(x)))
    }
}

/// K-norm sandwich with scales `1/L` below and `1/alpha` above, probed for validity.
pub fn knorm_envelope(t: &KngTarget) -> Result<Envelope> {
    let d = t.dim();
    let upper = KNormLaw::l2(t.x_star.clone(), 1.0 / t.alpha)?;
    let lower = KNormLaw::l2(t.x_star.clone(), 1.0 / t.l_smooth)?;
    let log_cu = ln_factorial(d) - d as f64 * t.alpha.ln() + ln_unit_ball_volume(d)?;
    let log_ratio = d as f64 * (t.alpha / t.l_smooth).ln();
    let env = Envelope::new(Arc::new(upper), log_cu).with_squeeze_ratio(Arc::new(lower), log_ratio);
    env.validate(&t.target(), DEFAULT_PROBES).map_err(as_structure)?;
    Ok(env)
}

/// Convex per-record loss with a gradient.
pub trait Loss: Send + Sync {
    fn value(&self, x: &[f64], record: &[f64]) -> f64;
    fn gradient(&self, x: &[f64], record: &[f64], out: &mut [f64]);
}

/// `0.5 (a . x - b)^2` for a record `[a_1, ..., a_d, b]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SquaredLoss;

impl SquaredLoss {
    fn residual(x: &[f64], record: &[f64]) -> f64 {
        let (a, b) = record.split_at(x.len());
        a.iter().zip(x).map(|(ai, xi)| ai * xi).sum::<f64>() - b[0]
    }
}

impl Loss for SquaredLoss {
    fn value(&self, x: &[f64], record: &[f64]) -> f64 {
        0.5 * Self::residual(x, record).powi(2)
    }

    fn gradient(&self, x: &[f64], record: &[f64], out: &mut [f64]) {
        let r = Self::residual(x, record);
        for (o, a) in out.iter_mut().zip(record) {
            *o += r * a;
        }
    }
}

/// Regularized ERM released through the exponential mechanism.
#[derive(Clone)]
pub struct ErmSpec {
    pub loss: Arc<dyn Loss>,
    pub dim: usize,
    pub records: Vec<Vec<f64>>,
    pub alpha_reg: f64,
    pub l_loss: f64,
    pub delta_sens: f64,
    pub eps: f64,
    /// Known minimizer; computed by the fixed-budget optimizer when absent.
    pub mode: Option<Vec<f64>>,
}

impl fmt::Debug for ErmSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ErmSpec")
            .field("dim", &self.dim)
            .field("n", &self.records.len())
            .field("alpha_reg", &self.alpha_reg)
            .field("l_loss", &self.l_loss)
            .field("delta_sens", &self.delta_sens)
            .field("eps", &self.eps)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ErmFile {
    records: Vec<Vec<f64>>,
    alpha_reg: f64,
    #[serde(rename = "L_loss")]
    l_loss: f64,
    delta_sens: f64,
    eps: f64,
    #[serde(default)]
    dim: Option<usize>,
}

impl ErmSpec {
    /// Squared-loss (ridge) spec; each record is `[a_1, ..., a_d, b]`.
    pub fn ridge(
        dim: usize,
        records: Vec<Vec<f64>>,
        alpha_reg: f64,
        l_loss: f64,
        delta_sens: f64,
        eps: f64,
    ) -> Self {
        Self {
            loss: Arc::new(SquaredLoss),
            dim,
            records,
            alpha_reg,
            l_loss,
            delta_sens,
            eps,
            mode: None,
        }
    }

    /// Ridge spec from JSON `{records, alpha_reg, L_loss, delta_sens, eps}`.
    /// `dim` may be given explicitly and is otherwise inferred from the records.
    pub fn from_json(text: &str) -> Result<Self> {
        let f: ErmFile = serde_json::from_str(text)?;
        let dim = match (f.dim, f.records.first()) {
            (Some(d), _) => d,
            (None, Some(r)) if r.len() >= 2 => r.len() - 1,
            _ => return Err(Error::Config("cannot infer dimension; add a \"dim\" field".into())),
        };
        Ok(Self::ridge(dim, f.records, f.alpha_reg, f.l_loss, f.delta_sens, f.eps))
    }

    pub fn from_json_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return domain("dimension must be at least 1");
        }
        if let Some(bad) = self.records.iter().position(|r| r.len() != self.dim + 1) {
            return Err(Error::Config(format!(
                "record {bad} has {} entries, expected {}",
                self.records[bad].len(),
                self.dim + 1
            )));
        }
        if !(self.delta_sens > 0.0) {
            return domain(format!("sensitivity must be positive, got {}", self.delta_sens));
        }
        if !(self.eps > 0.0) {
            return domain(format!("eps must be positive, got {}", self.eps));
        }
        if !(self.alpha_reg > 0.0) {
            return domain(format!("regularization must be positive, got {}", self.alpha_reg));
        }
        if !(self.l_loss >= 0.0) {
            return domain(format!("loss smoothness must be non-negative, got {}", self.l_loss));
        }
        Ok(())
    }

    /// `eps / (2 Delta)`.
    pub fn scale(&self) -> f64 {
        self.eps / (2.0 * self.delta_sens)
    }

    /// `sum loss + (alpha_reg/2) ||x||^2`.
    pub fn objective(&self, x: &[f64]) -> f64 {
        let reg = 0.5 * self.alpha_reg * x.iter().map(|v| v * v).sum::<f64>();
        self.records.iter().map(|r| self.loss.value(x, r)).sum::<f64>() + reg
    }

    pub fn objective_gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g: Vec<f64> = x.iter().map(|v| self.alpha_reg * v).collect();
        for r in &self.records {
            self.loss.gradient(x, r, &mut g);
        }
        g
    }

    /// Gradient descent with step `1/(n L_loss + alpha_reg)` from the origin,
    /// always running [`OPTIMIZER_ITERATIONS`] steps.
    pub fn find_mode(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let smooth = self.records.len() as f64 * self.l_loss + self.alpha_reg;
        let step = 1.0 / smooth;
        let mut x = vec![0.0; self.dim];
        for _ in 0..OPTIMIZER_ITERATIONS {
            let g = self.objective_gradient(&x);
            for (xi, gi) in x.iter_mut().zip(&g) {
                *xi -= step * gi;
            }
        }
        let grad_norm = norm2(&self.objective_gradient(&x));
        if !(grad_norm < OPTIMIZER_TOL) {
            return Err(Error::NoMode {
                grad_norm,
                iterations: OPTIMIZER_ITERATIONS,
            });
        }
        Ok(x)
    }
}

/// Target `exp((eps/(2 Delta)) g_D)` with `g_D = -(sum loss + r)`.
pub fn build_erm_target(spec: &ErmSpec) -> Result<StronglyConcaveTarget> {
    spec.validate()?;
    let mode = match &spec.mode {
        Some(m) if m.len() == spec.dim => m.clone(),
        Some(m) => return domain(format!("mode has {} coordinates, expected {}", m.len(), spec.dim)),
        None => spec.find_mode()?,
    };
    let k = spec.scale();
    let n = spec.records.len() as f64;
    let alpha = k * spec.alpha_reg;
    let l_smooth = k * (n * spec.l_loss + spec.alpha_reg);
    let s = spec.clone();
    StronglyConcaveTarget::new(alpha, l_smooth, mode, move |x| -k * s.objective(x))
}

/// Draws `n` points from `N(x*, 1/alpha)` and checks
/// `alpha ||x - x*|| <= ||grad|| <= L ||x - x*||` for an objective gradient.
pub fn check_gradient_bounds(
    grad: impl Fn(&[f64]) -> Vec<f64>,
    x_star: &[f64],
    alpha: f64,
    l_smooth: f64,
    n: usize,
    rng: &mut RngStream,
) -> Result<()> {
    for _ in 0..n {
        let x: Vec<f64> = x_star.iter().map(|m| m + 3.0 * rng.standard_normal() / alpha.sqrt()).collect();
        let r = norm2(&x.iter().zip(x_star).map(|(a, b)| a - b).collect::<Vec<_>>());
        let gn = norm2(&grad(&x));
        if gn < alpha * r * (1.0 - 1e-9) || gn > l_smooth * r * (1.0 + 1e-9) {
            return Err(Error::InvalidStructure(format!(
                "gradient norm {gn} outside [{}, {}] at distance {r}",
                alpha * r,
                l_smooth * r
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::squeeze_reject;

    #[test]
    fn gaussian_ratios() {
        let t = StronglyConcaveTarget::new(1.0, 4.0, vec![0.0, 0.0], |x| {
            -0.5 * x[0] * x[0] - 2.0 * x[1] * x[1]
        })
        .unwrap();
        let env = gaussian_envelope(&t).unwrap();
        assert!((env.squeeze_ratio().unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(t.envelope_ratio(), 0.25);
    }

    #[test]
    fn equal_constants_publish_at_once() {
        let t = StronglyConcaveTarget::new(2.0, 2.0, vec![1.0], |x| -(x[0] - 1.0).powi(2)).unwrap();
        let env = gaussian_envelope(&t).unwrap();
        let mut rng = RngStream::new(1, 0);
        for _ in 0..100 {
            assert_eq!(squeeze_reject(&t.target(), &env, &mut rng).unwrap().runtime, 1);
        }
    }

    #[test]
    fn wrong_constants_are_rejected() {
        // curvature of -x^2 is 2, so alpha = 3 overstates it
        let t = StronglyConcaveTarget::new(3.0, 4.0, vec![0.0], |x| -x[0] * x[0]).unwrap();
        assert!(matches!(gaussian_envelope(&t), Err(Error::InvalidStructure(_))));
        assert!(matches!(
            StronglyConcaveTarget::new(1.0, 4.0, vec![0.3], |x| -x[0] * x[0]),
            Err(Error::InvalidStructure(_))
        ));
        assert!(StronglyConcaveTarget::new(2.0, 1.0, vec![0.0], |x| -x[0] * x[0]).is_err());
    }

    #[test]
    fn knorm_ratios() {
        let t = KngTarget::new(1.0, 2.0, vec![0.0], |x| vec![1.5 * x[0]]).unwrap();
        let env = knorm_envelope(&t).unwrap();
        assert!((env.squeeze_ratio().unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn quadratic_kng_is_laplace() {
        let t = KngTarget::new(1.0, 1.0, vec![0.0], |x| vec![x[0]]).unwrap();
        let env = knorm_envelope(&t).unwrap();
        assert_eq!(env.squeeze_ratio().unwrap(), 1.0);
        let law = KNormLaw::l2(vec![0.0], 1.0).unwrap();
        for x in [-3.0, -0.2, 0.0, 1.7] {
            assert!((t.log_density(&[x]) - (law.logpdf(&[x]) + env.log_cu())).abs() < 1e-10);
        }
    }

    #[test]
    fn ridge_mode_matches_closed_form() {
        let records = vec![vec![1.0, 2.0], vec![-0.5, 0.3], vec![2.0, 1.0]];
        let spec = ErmSpec::ridge(1, records.clone(), 0.7, 4.0, 1.0, 1.0);
        let mode = spec.find_mode().unwrap();
        let num: f64 = records.iter().map(|r| r[0] * r[1]).sum();
        let den: f64 = records.iter().map(|r| r[0] * r[0]).sum::<f64>() + 0.7;
        assert!((mode[0] - num / den).abs() < 1e-10);
    }

    #[test]
    fn erm_constants() {
        let spec = ErmSpec::ridge(1, vec![vec![1.0, 2.0], vec![0.5, 0.3]], 0.5, 1.0, 2.0, 1.0);
        let t = build_erm_target(&spec).unwrap();
        assert!((t.alpha() - 0.125).abs() < 1e-15);
        assert!((t.l_smooth() - 0.625).abs() < 1e-15);
    }

    #[test]
    fn no_records_is_gaussian() {
        let spec = ErmSpec::ridge(2, vec![], 1.0, 1.0, 1.0, 2.0);
        let t = build_erm_target(&spec).unwrap();
        assert_eq!(t.mode(), &[0.0, 0.0]);
        assert_eq!(t.envelope_ratio(), 1.0);
        for x in [[0.5, -1.0], [2.0, 0.1]] {
            let expect = -(2.0 / 4.0) * (x[0] * x[0] + x[1] * x[1]);
            assert!((t.log_density(&x) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn ill_conditioned_problem_reports_no_mode() {
        // declared smoothness far above the true curvature makes the step tiny
        let spec = ErmSpec::ridge(1, vec![vec![1.0, 1.0]], 1e-9, 1e9, 1.0, 1.0);
        assert!(matches!(spec.find_mode(), Err(Error::NoMode { .. })));
    }

    #[test]
    fn loads_json() {
        let text = r#"{"records": [[1.0, 2.0], [0.5, -1.0]], "alpha_reg": 1.0, "L_loss": 1.0, "delta_sens": 1.0, "eps": 1.0}"#;
        let spec = ErmSpec::from_json(text).unwrap();
        assert_eq!(spec.dim, 1);
        assert_eq!(spec.records.len(), 2);
        assert!(matches!(ErmSpec::from_json("{\"records\": []}"), Err(Error::Config(_))));
    }
}
