//! Privacy accounting for the runtime of rejection samplers.
//!
//! A simple rejection sampler with acceptance probability `p_D` has runtime
//! `Geom(p_D)`. Across adjacent databases the runtime leaks at most what the
//! tradeoff function `f_R` allows, where
//! `R = sup log(1 - p_D) / log(1 - p_D')`. This module evaluates `f_R`, its
//! `(eps, delta)` conversions, the exact Neyman–Pearson tradeoff between two
//! geometric laws, and the related divergences.
//!
//! Releasing both a mechanism's sample and its runtime costs the tensor
//! product `f_R ⊗ f` of the two tradeoff functions. That product has no
//! closed form in general and is not computed here.

use serde::{Deserialize, Serialize};

use crate::distributions::GeometricLaw;
use crate::error::{domain, Error, Result};

const TOL: f64 = 1e-12;

/// Convex, non-increasing, piecewise-linear tradeoff function on `[0, 1]`.
///
/// Vertices are kept with `alpha` strictly decreasing; evaluation uses
/// binary search and linear interpolation, which is exact for tradeoffs of
/// discrete laws since randomized tests fill in the segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeoffCurve {
    vertices: Vec<(f64, f64)>,
}

impl TradeoffCurve {
    /// Builds a validated curve. Vertices may be given in any order;
    /// duplicate `alpha` values keep the smallest `beta`.
    pub fn new(vertices: Vec<(f64, f64)>) -> Result<Self> {
        let curve = Self::normalized(vertices)?;
        curve.validate()?;
        Ok(curve)
    }

    fn normalized(mut vertices: Vec<(f64, f64)>) -> Result<Self> {
        if vertices
            .iter()
            .any(|(a, b)| !a.is_finite() || !b.is_finite())
        {
            return domain("tradeoff vertices must be finite");
        }
        vertices.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.total_cmp(&y.1)));
        vertices.dedup_by(|later, earlier| later.0 == earlier.0);
        Ok(Self { vertices })
    }

    fn validate(&self) -> Result<()> {
        let v = &self.vertices;
        if v.len() < 2 || v[0].0 != 1.0 || v[v.len() - 1].0 != 0.0 {
            return Err(Error::InvalidStructure(
                "tradeoff curve needs vertices at alpha = 0 and alpha = 1".into(),
            ));
        }
        for &(a, b) in v {
            if !(0.0..=1.0).contains(&a) || !(-TOL..=1.0 + TOL).contains(&b) {
                return Err(Error::InvalidStructure(format!("vertex ({a}, {b}) outside the unit square")));
            }
            if b > 1.0 - a + 1e-9 {
                return Err(Error::InvalidStructure(format!(
                    "vertex ({a}, {b}) lies above the line 1 - alpha"
                )));
            }
        }
        // walking alpha downwards, beta must not decrease and slopes must
        // become steeper (convexity in increasing alpha).
        let mut prev_slope = f64::INFINITY;
        for w in v.windows(2) {
            let ((a1, b1), (a0, b0)) = (w[0], w[1]);
            if b0 < b1 - 1e-9 {
                return Err(Error::InvalidStructure("tradeoff curve must be non-increasing".into()));
            }
            let slope = (b1 - b0) / (a1 - a0);
            if slope > prev_slope + 1e-9 * prev_slope.abs().max(1.0) {
                return Err(Error::InvalidStructure("tradeoff curve must be convex".into()));
            }
            prev_slope = slope;
        }
        Ok(())
    }

    /// Lower convex hull of an arbitrary point cloud joined with the
    /// trivial tests `(0, 1)` and `(1, 0)`.
    ///
    /// This is the tradeoff achieved by randomizing between the supplied
    /// tests, so empirical ROC points become a valid curve.
    pub fn lower_hull(points: &[(f64, f64)]) -> Result<Self> {
        let mut pts: Vec<(f64, f64)> = points
            .iter()
            .copied()
            .filter(|(a, b)| a.is_finite() && b.is_finite())
            .map(|(a, b)| (a.clamp(0.0, 1.0), b.clamp(0.0, 1.0)))
            .collect();
        pts.push((0.0, 1.0));
        pts.push((1.0, 0.0));
        pts.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        let mut hull: Vec<(f64, f64)> = Vec::new();
        for p in pts {
            while hull.len() >= 2 {
                let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
                if cross <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        // keep the part of the hull from (0, min beta at 0) that is non-increasing
        let mut start = 0;
        while start + 1 < hull.len() && hull[start + 1].0 == 0.0 {
            start += 1;
        }
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(hull.len());
        for &p in &hull[start..] {
            if let Some(&(_, last_b)) = out.last() {
                if p.1 > last_b {
                    continue;
                }
            }
            out.push(p);
        }
        if out.last().map(|p| p.0) != Some(1.0) {
            out.push((1.0, 0.0));
        }
        Self::new(out)
    }

    /// Samples `f` on a uniform grid of `n + 1` points plus any extra knots.
    pub fn from_fn(f: impl Fn(f64) -> f64, n: usize, extra_knots: &[f64]) -> Result<Self> {
        let n = n.max(1);
        let mut alphas: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        alphas.extend(extra_knots.iter().copied().filter(|a| (0.0..=1.0).contains(a)));
        Self::new(alphas.into_iter().map(|a| (a, f(a))).collect())
    }

    /// The line `1 - alpha` (perfect privacy).
    pub fn identity() -> Self {
        Self {
            vertices: vec![(1.0, 0.0), (0.0, 1.0)],
        }
    }

    /// The exact piecewise-linear `f_{eps,delta}`.
    pub fn from_eps_delta(ed: EpsDelta) -> Result<Self> {
        let e = ed.eps.exp();
        let knee = (1.0 - ed.delta) / (1.0 + e);
        let mut v = vec![(0.0, 1.0 - ed.delta), (1.0 - ed.delta, 0.0), (1.0, 0.0)];
        if knee.is_finite() && knee > 0.0 {
            v.push((knee, f_eps_delta(ed, knee)));
        }
        Self::new(v)
    }

    /// Vertices in order of strictly decreasing `alpha`.
    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    pub fn eval(&self, alpha: f64) -> f64 {
        let a = alpha.clamp(0.0, 1.0);
        let v = &self.vertices;
        // first index whose alpha is <= a
        let i = v.partition_point(|&(va, _)| va > a);
        if i == 0 {
            return v[0].1;
        }
        if i >= v.len() {
            return v[v.len() - 1].1;
        }
        let (a_hi, b_hi) = v[i - 1];
        let (a_lo, b_lo) = v[i];
        if a_hi == a_lo {
            return b_lo.min(b_hi);
        }
        let t = (a - a_lo) / (a_hi - a_lo);
        b_lo + t * (b_hi - b_lo)
    }

    /// Reflection across `beta = alpha`: the curve of the swapped hypotheses.
    pub fn inverse(&self) -> Result<Self> {
        Self::new(self.vertices.iter().map(|&(a, b)| (b, a)).collect())
    }

    /// `max (other - self)` over a grid plus both vertex sets.
    pub fn max_gap_over(&self, other: &TradeoffCurve, grid: usize) -> f64 {
        self.knots(other, grid)
            .into_iter()
            .map(|a| self.eval(a) - other.eval(a))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `sup |self - other|` over a grid plus both vertex sets.
    pub fn sup_distance(&self, other: &TradeoffCurve, grid: usize) -> f64 {
        self.knots(other, grid)
            .into_iter()
            .map(|a| (self.eval(a) - other.eval(a)).abs())
            .fold(0.0, f64::max)
    }

    fn knots(&self, other: &TradeoffCurve, grid: usize) -> Vec<f64> {
        let mut a: Vec<f64> = (0..=grid).map(|i| i as f64 / grid as f64).collect();
        a.extend(self.vertices.iter().map(|v| v.0));
        a.extend(other.vertices.iter().map(|v| v.0));
        a
    }
}

/// `(eps, delta)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsDelta {
    pub eps: f64,
    pub delta: f64,
}

impl EpsDelta {
    pub fn new(eps: f64, delta: f64) -> Result<Self> {
        if !(eps >= 0.0) {
            return domain(format!("eps must be non-negative, got {eps}"));
        }
        if !(0.0..=1.0).contains(&delta) {
            return domain(format!("delta must lie in [0, 1], got {delta}"));
        }
        Ok(Self { eps, delta })
    }
}

/// Worst-case ratio of log-survival rates, normalized to be at least 1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct RBound(f64);

impl RBound {
    pub fn new(r: f64) -> Result<Self> {
        if !(r >= 1.0) {
            return domain(format!("R must be at least 1, got {r}"));
        }
        Ok(Self(r))
    }

    /// `R` for two acceptance probabilities, ordered so that `R >= 1`.
    pub fn from_acceptance(p: f64, q: f64) -> Result<Self> {
        let lp = GeometricLaw::new(p)?.log_survival();
        let lq = GeometricLaw::new(q)?.log_survival();
        if !lp.is_finite() || !lq.is_finite() {
            return domain("acceptance probabilities must be below 1 for a finite R");
        }
        let r = lp / lq;
        Self::new(if r >= 1.0 { r } else { 1.0 / r })
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `(R^{R/(1-R)}, 1 - R^{1/(1-R)})`; the `R -> 1` limit is `(1/e, 1 - 1/e)`.
    pub fn breakpoints(self) -> (f64, f64) {
        let r = self.0;
        if r == 1.0 {
            let e = (-1.0f64).exp();
            return (e, 1.0 - e);
        }
        let ln_r = r.ln();
        let a1 = (r * ln_r / (1.0 - r)).exp();
        let a2 = -(ln_r / (1.0 - r)).exp_m1();
        (a1, a2)
    }

    /// `delta(0) = (R - 1) R^{R/(1-R)}`, the largest delta with a meaningful eps.
    pub fn delta_at_zero(self) -> f64 {
        if self.0 == 1.0 {
            return 0.0;
        }
        (self.0 - 1.0) * self.breakpoints().0
    }
}

/// `D_inf(Geom(p) || Geom(q))`: `log(p/q)` when `p >= q`, `+inf` otherwise.
pub fn geom_max_divergence(p: f64, q: f64) -> Result<f64> {
    check_open_unit(p, "p")?;
    check_open_unit(q, "q")?;
    Ok(if p >= q { (p / q).ln() } else { f64::INFINITY })
}

/// Symmetric max-divergence; infinite whenever `p != q`.
pub fn symmetric_geom_max_divergence(p: f64, q: f64) -> Result<f64> {
    Ok(geom_max_divergence(p, q)?.max(geom_max_divergence(q, p)?))
}

fn check_open_unit(x: f64, name: &str) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        domain(format!("{name} must lie in (0, 1), got {x}"))
    }
}

/// The runtime tradeoff function `f_R`.
pub fn f_r(r: RBound, alpha: f64) -> f64 {
    let a = alpha.clamp(0.0, 1.0);
    let rv = r.value();
    if rv == 1.0 {
        return 1.0 - a;
    }
    let (a1, a2) = r.breakpoints();
    if a <= a1 {
        1.0 - a.powf(1.0 / rv)
    } else if a < a2 {
        -a + a1 + a2
    } else {
        (1.0 - a).powf(rv)
    }
}

/// `f_R` sampled on `n + 1` grid points plus both breakpoints.
pub fn f_r_curve(r: RBound, n: usize) -> Result<TradeoffCurve> {
    let (a1, a2) = r.breakpoints();
    TradeoffCurve::from_fn(|a| f_r(r, a), n, &[a1, a2])
}

/// `delta(eps) = (1 - 1/R) exp((-eps - log R) / (R - 1))`.
pub fn delta_of_eps(r: RBound, eps: f64) -> Result<f64> {
    if !(eps >= 0.0) {
        return domain(format!("eps must be non-negative, got {eps}"));
    }
    let rv = r.value();
    if rv == 1.0 {
        return Ok(0.0);
    }
    Ok((1.0 - 1.0 / rv) * ((-eps - rv.ln()) / (rv - 1.0)).exp())
}

/// `eps(delta) = log(1/R) + (R - 1)(log(1/delta) + log(1 - 1/R))`,
/// clamped at 0 once `delta` exceeds `delta(0)`.
pub fn eps_of_delta(r: RBound, delta: f64) -> Result<f64> {
    if !(delta > 0.0) || delta > 1.0 {
        return domain(format!("delta must lie in (0, 1], got {delta}"));
    }
    let rv = r.value();
    if rv == 1.0 || delta >= r.delta_at_zero() {
        return Ok(0.0);
    }
    let eps = -rv.ln() + (rv - 1.0) * (-delta.ln() + (-1.0 / rv).ln_1p());
    Ok(eps.max(0.0))
}

/// `f_{eps,delta}(alpha) = max{0, 1 - delta - e^eps alpha, e^-eps (1 - delta - alpha)}`.
pub fn f_eps_delta(ed: EpsDelta, alpha: f64) -> f64 {
    let e = ed.eps.exp();
    let first = 1.0 - ed.delta - e * alpha;
    let second = (1.0 - ed.delta - alpha) / e;
    0.0f64.max(first).max(if second.is_finite() { second } else { 0.0 })
}

/// Smallest delta such that `1 - delta - e^eps alpha <= f(alpha)` for all alpha.
pub fn curve_to_eps_delta(f: &TradeoffCurve, eps: f64) -> Result<EpsDelta> {
    if !(eps >= 0.0) {
        return domain(format!("eps must be non-negative, got {eps}"));
    }
    let e = eps.exp();
    let delta = f
        .vertices()
        .iter()
        .map(|&(a, b)| 1.0 - e * a - b)
        .fold(0.0f64, f64::max);
    EpsDelta::new(eps, delta.min(1.0))
}

/// `R` of a generic exponential mechanism whose best acceptance probability is `p_star`:
/// `log(1 - p*) / log(1 - e^-eps p*)`.
pub fn exp_mech_r(eps: f64, p_star: f64) -> Result<RBound> {
    if !(eps > 0.0) {
        return domain(format!("eps must be positive, got {eps}"));
    }
    check_open_unit(p_star, "p*")?;
    let r = (-p_star).ln_1p() / (-(-eps).exp() * p_star).ln_1p();
    RBound::new(r.max(1.0))
}

/// Partial log-ratio `log(p_t/q_t) + sum_{i<t} log((1-p_i)/(1-q_i))` for `t = 1..=horizon`.
///
/// Entries are `+inf` once exactly one of the two samplers accepts with certainty.
pub fn adaptive_log_ratio_path(p_seq: &[f64], q_seq: &[f64], horizon: usize) -> Result<Vec<f64>> {
    if horizon == 0 {
        return domain("horizon must be at least 1");
    }
    if p_seq.len() < horizon || q_seq.len() < horizon {
        return domain(format!(
            "sequences of length {} and {} are shorter than the horizon {horizon}",
            p_seq.len(),
            q_seq.len()
        ));
    }
    for &x in p_seq[..horizon].iter().chain(&q_seq[..horizon]) {
        if !(x > 0.0 && x <= 1.0) {
            return domain(format!("acceptance probabilities must lie in (0, 1], got {x}"));
        }
    }
    let mut path = Vec::with_capacity(horizon);
    let mut survival = 0.0;
    for t in 0..horizon {
        let (p, q) = (p_seq[t], q_seq[t]);
        if (p == 1.0) != (q == 1.0) {
            path.push(f64::INFINITY);
            break;
        }
        path.push((p / q).ln() + survival);
        if p == 1.0 {
            // both runtimes stop here with certainty
            break;
        }
        survival += (-p).ln_1p() - (-q).ln_1p();
    }
    Ok(path)
}

/// Lower bound on the runtime privacy cost of a deterministic adaptive
/// rejection sampler over the first `horizon` iterations.
///
/// The returned value is a necessary lower bound on `eps_T`, not its exact
/// value: the sup of `|log P_D(T=t) / P_D'(T=t)|` over `t <= horizon`, which
/// covers both orderings of the two databases.
pub fn adaptive_runtime_divergence(p_seq: &[f64], q_seq: &[f64], horizon: usize) -> Result<f64> {
    let path = adaptive_log_ratio_path(p_seq, q_seq, horizon)?;
    Ok(path.into_iter().map(f64::abs).fold(0.0, f64::max))
}

/// `R` of `k`-fold batched (or parallel) samplers; identical to the unbatched `R`.
pub fn batched_r(p: f64, q: f64, k: u64) -> Result<f64> {
    check_open_unit(p, "p")?;
    check_open_unit(q, "q")?;
    let bp = GeometricLaw::new(p)?.batched(k)?;
    let bq = GeometricLaw::new(q)?.batched(k)?;
    Ok(bp.log_survival() / bq.log_survival())
}

/// Truncation level for the exact geometric tradeoff.
pub const EXACT_TRADEOFF_ALPHA_FLOOR: f64 = 1e-6;

/// Exact Neyman–Pearson tradeoff `T(Geom(p), Geom(q))`.
///
/// For `p > q` the optimal tests reject when the runtime reaches a threshold
/// `t`, giving vertices `((1-p)^{t-1}, 1 - (1-q)^{t-1})`. Vertices stop once
/// `alpha` drops below [`EXACT_TRADEOFF_ALPHA_FLOOR`] and the curve is closed
/// at `(0, 1)`. For `p < q` the reflected curve of the swapped pair is used.
pub fn exact_geometric_tradeoff(p: f64, q: f64) -> Result<TradeoffCurve> {
    check_open_unit(p, "p")?;
    check_open_unit(q, "q")?;
    if p == q {
        return Ok(TradeoffCurve::identity());
    }
    if p < q {
        return exact_geometric_tradeoff(q, p)?.inverse();
    }
    let lp = (-p).ln_1p();
    let lq = (-q).ln_1p();
    let mut v = Vec::new();
    let mut t = 0.0f64;
    loop {
        let alpha = (t * lp).exp();
        let beta = -(t * lq).exp_m1();
        v.push((alpha, beta));
        if alpha < EXACT_TRADEOFF_ALPHA_FLOOR {
            break;
        }
        t += 1.0;
    }
    v.push((0.0, 1.0));
    TradeoffCurve::new(v)
}
