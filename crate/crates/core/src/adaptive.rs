//! Adaptive rejection sampling for log-Hölder densities on a box.
//!
//! The proposal is `exp(ĝ)` where `ĝ` is piecewise constant on a grid and
//! `|g - ĝ| <= r̂`. One uniform per iteration drives both tests:
//! the candidate is accepted when `log Y <= g(X) - ĝ(X) - r̂`, and the held
//! candidate is published when `log Y <= -2 r̂`. The publish probability is
//! therefore `exp(-2 r̂)` at every iteration, whatever `g` is, so the
//! inter-publish runtime only depends on the refinement schedule.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::RngStream;
use crate::error::{domain, Error, Result};

/// Default cap on `m^d` for a single grid.
pub const DEFAULT_EVAL_BUDGET: u64 = 1 << 22;

/// Probe points per refinement level for the sandwich check.
pub const LEVEL_PROBES: usize = 10_000;

const HOLDER_PROBES: usize = 10_000;
const PROBE_SEED: u64 = 0x0ad4_7e5e_ed00_0001;
const SLACK: f64 = 1e-9;

type LogFn = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// Target `exp(g)` on a box with `|g(x) - g(y)| <= H ||x - y||_inf^s`.
#[derive(Clone)]
pub struct LogHolderTarget {
    g: Arc<LogFn>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    s: f64,
    h: f64,
}

impl fmt::Debug for LogHolderTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LogHolderTarget")
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .field("s", &self.s)
            .field("h", &self.h)
            .finish_non_exhaustive()
    }
}

impl LogHolderTarget {
    /// Target on `[0, 1]^d`.
    pub fn unit(dim: usize, s: f64, h: f64, g: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Result<Self> {
        Self::on_box(vec![0.0; dim], vec![1.0; dim], s, h, g)
    }

    /// Target on `[lower, upper]`. The Hölder condition is spot-checked on
    /// random pairs at several separations.
    pub fn on_box(
        lower: Vec<f64>,
        upper: Vec<f64>,
        s: f64,
        h: f64,
        g: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let t = Self::unchecked(lower, upper, s, h, g)?;
        t.check_holder(HOLDER_PROBES)?;
        Ok(t)
    }

    /// Same as [`on_box`](Self::on_box) without the Hölder spot-check.
    pub fn unchecked(
        lower: Vec<f64>,
        upper: Vec<f64>,
        s: f64,
        h: f64,
        g: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return domain("box bounds must be non-empty and of equal length");
        }
        if lower.iter().zip(&upper).any(|(a, b)| !(a < b) || !a.is_finite() || !b.is_finite()) {
            return domain("box needs finite bounds with lower < upper on every axis");
        }
        if !(s > 0.0 && s <= 1.0) {
            return domain(format!("Hölder exponent must lie in (0, 1], got {s}"));
        }
        if !(h > 0.0 && h.is_finite()) {
            return domain(format!("Hölder constant must be positive, got {h}"));
        }
        Ok(Self {
            g: Arc::new(g),
            lower,
            upper,
            s,
            h,
        })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn log_density(&self, x: &[f64]) -> f64 {
        (self.g)(x)
    }

    /// Hölder constant after mapping the box onto the unit cube.
    pub fn unit_h(&self) -> f64 {
        let edge = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(a, b)| b - a)
            .fold(0.0, f64::max);
        self.h * edge.powf(self.s)
    }

    fn to_box(&self, u: &[f64]) -> Vec<f64> {
        u.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(v, (a, b))| a + v * (b - a))
            .collect()
    }

    fn to_unit(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(v, (a, b))| ((v - a) / (b - a)).clamp(0.0, 1.0))
            .collect()
    }

    fn check_holder(&self, probes: usize) -> Result<()> {
        let d = self.dim();
        let mut rng = RngStream::new(PROBE_SEED, 1);
        let h_unit = self.unit_h();
        for i in 0..probes {
            let u: Vec<f64> = (0..d).map(|_| rng.uniform()).collect();
            let scale = 10f64.powi(-((i % 6) as i32));
            let v: Vec<f64> = u
                .iter()
                .map(|a| (a + scale * (2.0 * rng.uniform() - 1.0)).clamp(0.0, 1.0))
                .collect();
            let dist = u.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let gx = self.log_density(&self.to_box(&u));
            let gy = self.log_density(&self.to_box(&v));
            let bound = h_unit * dist.powf(self.s);
            if (gx - gy).abs() > bound * (1.0 + 1e-9) + 1e-12 {
                return Err(Error::InvalidStructure(format!(
                    "Hölder bound H = {} with s = {} fails: |g difference| {} exceeds {bound}",
                    self.h,
                    self.s,
                    (gx - gy).abs()
                )));
            }
        }
        Ok(())
    }
}

/// Placement of the evaluation points on each axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridLayout {
    /// `m` cells per axis evaluated at their centers; `r̂ = H (1/(2m))^s`.
    #[default]
    CellCenter,
    /// `m` equally spaced points including both ends; `r̂ = H (1/(2(m-1)))^s`.
    Endpoint,
}

impl GridLayout {
    fn min_m(self) -> usize {
        match self {
            GridLayout::CellCenter => 1,
            GridLayout::Endpoint => 2,
        }
    }

    /// Largest `l_inf` distance from a point to its nearest evaluation point.
    pub fn radius(self, m: usize) -> f64 {
        match self {
            GridLayout::CellCenter => 0.5 / m as f64,
            GridLayout::Endpoint => 0.5 / (m - 1) as f64,
        }
    }

    fn point(self, m: usize, i: usize) -> f64 {
        match self {
            GridLayout::CellCenter => (i as f64 + 0.5) / m as f64,
            GridLayout::Endpoint => i as f64 / (m - 1) as f64,
        }
    }

    fn cell(self, m: usize, i: usize) -> (f64, f64) {
        match self {
            GridLayout::CellCenter => (i as f64 / m as f64, (i + 1) as f64 / m as f64),
            GridLayout::Endpoint => {
                let step = 1.0 / (m - 1) as f64;
                (((i as f64 - 0.5) * step).max(0.0), ((i as f64 + 0.5) * step).min(1.0))
            }
        }
    }

    fn locate(self, m: usize, u: f64) -> usize {
        match self {
            GridLayout::CellCenter => ((u * m as f64).floor() as usize).min(m - 1),
            GridLayout::Endpoint => ((u * (m - 1) as f64).round() as usize).min(m - 1),
        }
    }

    /// Per-axis index map from an old grid into a new one when the new grid
    /// contains every old evaluation point.
    fn embedding(self, m_old: usize, m_new: usize) -> Option<Vec<usize>> {
        match self {
            GridLayout::CellCenter => {
                if !m_new.is_multiple_of(m_old) || (m_new / m_old).is_multiple_of(2) {
                    return None;
                }
                let k = m_new / m_old;
                Some((0..m_old).map(|j| j * k + (k - 1) / 2).collect())
            }
            GridLayout::Endpoint => {
                if !(m_new - 1).is_multiple_of(m_old - 1) {
                    return None;
                }
                let k = (m_new - 1) / (m_old - 1);
                Some((0..m_old).map(|j| j * k).collect())
            }
        }
    }
}

/// Piecewise-constant `ĝ` with radius `r̂` and a cumulative cell-mass table.
#[derive(Clone)]
pub struct GridApproximation {
    target: LogHolderTarget,
    layout: GridLayout,
    m: usize,
    values: Vec<f64>,
    r_hat: f64,
    cumulative: Vec<f64>,
    evaluations: u64,
}

impl fmt::Debug for GridApproximation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridApproximation")
            .field("layout", &self.layout)
            .field("m", &self.m)
            .field("r_hat", &self.r_hat)
            .field("cells", &self.values.len())
            .finish_non_exhaustive()
    }
}

/// Grid with cell centers and the default evaluation budget.
pub fn build_grid(target: &LogHolderTarget, m: usize) -> Result<GridApproximation> {
    GridApproximation::build(target, m, GridLayout::CellCenter, DEFAULT_EVAL_BUDGET)
}

/// Draws a point from `exp(ĝ)` normalized over the box.
pub fn sample_from_grid(grid: &GridApproximation, rng: &mut RngStream) -> Vec<f64> {
    grid.sample(rng).1
}

impl GridApproximation {
    pub fn build(target: &LogHolderTarget, m: usize, layout: GridLayout, budget: u64) -> Result<Self> {
        Self::build_reusing(target, m, layout, budget, None)
    }

    /// Grid at resolution `m`, taking `ĝ` values from `self` wherever the new
    /// grid contains the old evaluation points.
    pub fn refine(&self, m: usize, budget: u64) -> Result<Self> {
        Self::build_reusing(&self.target, m, self.layout, budget, Some(self))
    }

    fn build_reusing(
        target: &LogHolderTarget,
        m: usize,
        layout: GridLayout,
        budget: u64,
        previous: Option<&GridApproximation>,
    ) -> Result<Self> {
        if m < layout.min_m() {
            return domain(format!("{layout:?} grid needs m >= {}, got {m}", layout.min_m()));
        }
        let d = target.dim();
        let cells = (m as u64)
            .checked_pow(d as u32)
            .filter(|c| *c <= budget)
            .ok_or(Error::Budget {
                needed: (m as f64).powi(d as i32).min(u64::MAX as f64) as u64,
                budget,
            })?;
        let cells = cells as usize;

        // new per-axis index -> old per-axis index, when the old grid embeds
        let reuse: Option<(Vec<Option<usize>>, &GridApproximation)> = previous
            .filter(|p| p.layout == layout && p.m <= m)
            .and_then(|p| {
                layout.embedding(p.m, m).map(|emb| {
                    let mut back = vec![None; m];
                    for (j, i) in emb.into_iter().enumerate() {
                        back[i] = Some(j);
                    }
                    (back, p)
                })
            });

        let values: Vec<(f64, bool)> = (0..cells)
            .into_par_iter()
            .map(|idx| {
                let axes = unflatten(idx, m, d);
                if let Some((back, prev)) = &reuse {
                    let old: Option<Vec<usize>> = axes.iter().map(|i| back[*i]).collect();
                    if let Some(old) = old {
                        return (prev.values[flatten(&old, prev.m)], false);
                    }
                }
                let u: Vec<f64> = axes.iter().map(|i| layout.point(m, *i)).collect();
                (target.log_density(&target.to_box(&u)), true)
            })
            .collect();
        let evaluations = values.iter().filter(|(_, fresh)| *fresh).count() as u64;
        let values: Vec<f64> = values.into_iter().map(|(v, _)| v).collect();
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidStructure(format!(
                "log density is not finite at grid cell {bad}"
            )));
        }

        let r_hat = target.unit_h() * layout.radius(m).powf(target.s());
        let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut cumulative = Vec::with_capacity(cells);
        let mut acc = 0.0;
        for (idx, v) in values.iter().enumerate() {
            let vol: f64 = unflatten(idx, m, d)
                .iter()
                .map(|i| {
                    let (lo, hi) = layout.cell(m, *i);
                    hi - lo
                })
                .product();
            acc += (v - top).exp() * vol;
            cumulative.push(acc);
        }

        Ok(Self {
            target: target.clone(),
            layout,
            m,
            values,
            r_hat,
            cumulative,
            evaluations,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn layout(&self) -> GridLayout {
        self.layout
    }

    pub fn r_hat(&self) -> f64 {
        self.r_hat
    }

    /// `exp(-2 r̂)`, the per-iteration publish probability.
    pub fn publish_probability(&self) -> f64 {
        (-2.0 * self.r_hat).exp()
    }

    /// `ĝ` at each cell, indexed with the last axis fastest.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of fresh target evaluations made when building this grid.
    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    /// Probability mass of each cell under `exp(ĝ)`.
    pub fn cell_masses(&self) -> Vec<f64> {
        let total = *self.cumulative.last().expect("grid has cells");
        let mut prev = 0.0;
        self.cumulative
            .iter()
            .map(|c| {
                let w = (c - prev) / total;
                prev = *c;
                w
            })
            .collect()
    }

    /// Cell index containing `x` (original coordinates).
    pub fn cell_of(&self, x: &[f64]) -> usize {
        let u = self.target.to_unit(x);
        let axes: Vec<usize> = u.iter().map(|v| self.layout.locate(self.m, *v)).collect();
        flatten(&axes, self.m)
    }

    pub fn log_hat(&self, x: &[f64]) -> f64 {
        self.values[self.cell_of(x)]
    }

    /// Checks `ĝ - r̂ <= g <= ĝ + r̂` at `probes` uniform points.
    pub fn check_sandwich(&self, probes: usize) -> Result<()> {
        let d = self.target.dim();
        let mut rng = RngStream::new(PROBE_SEED, 2 + self.m as u64);
        for _ in 0..probes {
            let u: Vec<f64> = (0..d).map(|_| rng.uniform()).collect();
            let x = self.target.to_box(&u);
            self.check_point(&x, self.target.log_density(&x), self.log_hat(&x))?;
        }
        Ok(())
    }

    fn check_point(&self, x: &[f64], g: f64, g_hat: f64) -> Result<()> {
        if (g - g_hat).abs() > self.r_hat + SLACK {
            return Err(Error::InvalidStructure(format!(
                "|g - ĝ| = {} exceeds r̂ = {} at {x:?} (m = {})",
                (g - g_hat).abs(),
                self.r_hat,
                self.m
            )));
        }
        Ok(())
    }

    /// Draws `(cell, point)` from `exp(ĝ)`.
    fn sample(&self, rng: &mut RngStream) -> (usize, Vec<f64>) {
        let total = *self.cumulative.last().expect("grid has cells");
        let u = rng.uniform() * total;
        let idx = self
            .cumulative
            .partition_point(|c| *c <= u)
            .min(self.cumulative.len() - 1);
        let unit: Vec<f64> = unflatten(idx, self.m, self.target.dim())
            .into_iter()
            .map(|i| {
                let (lo, hi) = self.layout.cell(self.m, i);
                lo + rng.uniform() * (hi - lo)
            })
            .collect();
        (idx, self.target.to_box(&unit))
    }
}

fn unflatten(mut idx: usize, m: usize, d: usize) -> Vec<usize> {
    let mut axes = vec![0; d];
    for a in (0..d).rev() {
        axes[a] = idx % m;
        idx /= m;
    }
    axes
}

fn flatten(axes: &[usize], m: usize) -> usize {
    axes.iter().fold(0, |acc, i| acc * m + i)
}

/// Grid resolution as a function of the iteration count and the structural
/// constants only. The sampler never passes target values to a schedule.
pub trait RefinementSchedule: Send + Sync {
    /// Resolution `m` to use at iteration `t >= 1`.
    fn resolution(&self, t: u64, h: f64, s: f64, d: usize) -> usize;
}

/// Built-in schedules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Schedule {
    Fixed { m: usize },
    /// `m` doubles every `doubling_interval` iterations while `m^d <= max_evals`.
    Doubling {
        initial_m: usize,
        #[serde(default = "default_interval")]
        doubling_interval: u64,
        #[serde(default = "default_max_evals")]
        max_evals: u64,
    },
    /// `levels[i] = (first iteration, m)`, sorted by first iteration.
    Levels { levels: Vec<(u64, usize)> },
}

fn default_interval() -> u64 {
    64
}

fn default_max_evals() -> u64 {
    DEFAULT_EVAL_BUDGET
}

impl Schedule {
    pub fn doubling(initial_m: usize) -> Self {
        Schedule::Doubling {
            initial_m,
            doubling_interval: default_interval(),
            max_evals: default_max_evals(),
        }
    }
}

impl RefinementSchedule for Schedule {
    fn resolution(&self, t: u64, _h: f64, _s: f64, d: usize) -> usize {
        match self {
            Schedule::Fixed { m } => *m,
            Schedule::Doubling {
                initial_m,
                doubling_interval,
                max_evals,
            } => {
                let steps = (t.saturating_sub(1) / (*doubling_interval).max(1)).min(62);
                let mut m = *initial_m;
                for _ in 0..steps {
                    let next = m.saturating_mul(2);
                    match (next as u64).checked_pow(d as u32) {
                        Some(c) if c <= *max_evals => m = next,
                        _ => break,
                    }
                }
                m
            }
            Schedule::Levels { levels } => levels
                .iter()
                .take_while(|(start, _)| *start <= t)
                .last()
                .or(levels.first())
                .map(|(_, m)| *m)
                .unwrap_or(0),
        }
    }
}

impl<F> RefinementSchedule for F
where
    F: Fn(u64, f64, f64, usize) -> usize + Send + Sync,
{
    fn resolution(&self, t: u64, h: f64, s: f64, d: usize) -> usize {
        self(t, h, s, d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveOptions {
    pub layout: GridLayout,
    /// Most log-density evaluations a single grid level may spend.
    pub eval_budget: u64,
    /// Probe each new grid level for the sandwich before using it.
    pub check_levels: bool,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            layout: GridLayout::CellCenter,
            eval_budget: DEFAULT_EVAL_BUDGET,
            check_levels: true,
        }
    }
}

/// Iterations spent at one grid resolution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelRecord {
    pub m: usize,
    pub r_hat: f64,
    pub first_iteration: u64,
    pub iterations: u64,
    pub publishes: u64,
}

/// Published stream with inter-publish runtimes and the levels visited.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveRun {
    pub samples: Vec<Vec<f64>>,
    pub runtimes: Vec<u64>,
    pub levels: Vec<LevelRecord>,
    pub evaluations: u64,
}

/// Outcome of a single iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub iteration: u64,
    pub target_accept: bool,
    pub published: Option<Vec<f64>>,
}

/// Step-by-step adaptive sampler.
pub struct AdaptiveSampler<'a> {
    target: &'a LogHolderTarget,
    schedule: &'a dyn RefinementSchedule,
    opts: AdaptiveOptions,
    grid: Option<GridApproximation>,
    t: u64,
    candidate: Option<Vec<f64>>,
    levels: Vec<LevelRecord>,
    evaluations: u64,
}

impl<'a> AdaptiveSampler<'a> {
    pub fn new(target: &'a LogHolderTarget, schedule: &'a dyn RefinementSchedule, opts: AdaptiveOptions) -> Self {
        Self {
            target,
            schedule,
            opts,
            grid: None,
            t: 0,
            candidate: None,
            levels: Vec::new(),
            evaluations: 0,
        }
    }

    /// Current grid, if an iteration has run.
    pub fn grid(&self) -> Option<&GridApproximation> {
        self.grid.as_ref()
    }

    pub fn levels(&self) -> &[LevelRecord] {
        &self.levels
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    fn resolution(&self, t: u64) -> Result<usize> {
        let (h, s, d) = (self.target.h(), self.target.s(), self.target.dim());
        let m = self.schedule.resolution(t, h, s, d);
        if m == 0 {
            return Err(Error::ScheduleContract(format!("resolution 0 at iteration {t}")));
        }
        if self.schedule.resolution(t, h, s, d) != m {
            return Err(Error::ScheduleContract(format!(
                "schedule gave two different resolutions for iteration {t}"
            )));
        }
        Ok(m)
    }

    fn ensure_grid(&mut self, t: u64) -> Result<()> {
        let m = self.resolution(t)?;
        if self.grid.as_ref().is_some_and(|g| g.m == m) {
            return Ok(());
        }
        let grid = match &self.grid {
            Some(old) => old.refine(m, self.opts.eval_budget)?,
            None => GridApproximation::build(self.target, m, self.opts.layout, self.opts.eval_budget)?,
        };
        if self.opts.check_levels {
            grid.check_sandwich(LEVEL_PROBES)?;
        }
        self.evaluations += grid.evaluations;
        self.levels.push(LevelRecord {
            m,
            r_hat: grid.r_hat,
            first_iteration: t,
            iterations: 0,
            publishes: 0,
        });
        self.grid = Some(grid);
        Ok(())
    }

    /// One iteration: refine if the schedule asks for it, draw `(X, Y)`, test.
    pub fn step(&mut self, rng: &mut RngStream) -> Result<Step> {
        let t = self.t + 1;
        self.ensure_grid(t)?;
        self.t = t;
        let grid = self.grid.as_ref().expect("grid built");
        let (cell, x) = grid.sample(rng);
        let log_y = rng.uniform().ln();
        let g = self.target.log_density(&x);
        let g_hat = grid.values[cell];
        grid.check_point(&x, g, g_hat)?;
        let r = grid.r_hat;

        let target_accept = self.candidate.is_none() && log_y <= g - g_hat - r;
        if target_accept {
            self.candidate = Some(x);
        }
        let publish = log_y <= -2.0 * r;
        let level = self.levels.last_mut().expect("level recorded");
        level.iterations += 1;
        let published = if publish {
            level.publishes += 1;
            let value = self.candidate.take().ok_or_else(|| {
                Error::Invariant(format!("publish at iteration {t} without an accepted candidate"))
            })?;
            Some(value)
        } else {
            None
        };
        Ok(Step {
            iteration: t,
            target_accept,
            published,
        })
    }
}

/// Runs the adaptive sampler until `n` values are published.
pub fn adaptive_sample(
    target: &LogHolderTarget,
    n: usize,
    schedule: &dyn RefinementSchedule,
    rng: &mut RngStream,
) -> Result<AdaptiveRun> {
    adaptive_sample_with(target, n, schedule, AdaptiveOptions::default(), rng)
}

pub fn adaptive_sample_with(
    target: &LogHolderTarget,
    n: usize,
    schedule: &dyn RefinementSchedule,
    opts: AdaptiveOptions,
    rng: &mut RngStream,
) -> Result<AdaptiveRun> {
    if n == 0 {
        return domain("number of samples must be at least 1");
    }
    let mut sampler = AdaptiveSampler::new(target, schedule, opts);
    let mut samples = Vec::with_capacity(n);
    let mut runtimes = Vec::with_capacity(n);
    let mut last = 0;
    while samples.len() < n {
        let step = sampler.step(rng)?;
        if let Some(x) = step.published {
            samples.push(x);
            runtimes.push(step.iteration - last);
            last = step.iteration;
        }
    }
    Ok(AdaptiveRun {
        samples,
        runtimes,
        levels: sampler.levels,
        evaluations: sampler.evaluations,
    })
}

/// Ratio of the rejection probabilities with and without the publish gate,
/// `(1 - e^{-2r}) / (1 - e^{-r}) = 1 + e^{-r}`.
pub fn relative_runtime_ratio(r_hat: f64) -> f64 {
    1.0 + (-r_hat).exp()
}
