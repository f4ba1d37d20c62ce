//! Statistical certification, timing-attack simulation and reproduction data.
//!
//! Every statistical test runs at level [`TEST_LEVEL`]. The verify suite runs
//! at most ten of them, so a correct implementation fails the suite with
//! probability below one percent.

pub mod stats;
pub mod runner;
pub mod suite;
pub mod targets;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::accounting::{
    eps_of_delta, exact_geometric_tradeoff, f_r, f_r_curve, RBound, TradeoffCurve,
};
use crate::distributions::{GeometricLaw, RngStream};
use crate::error::{Error, Result};

/// Per-test significance level.
pub const TEST_LEVEL: f64 = 1e-3;

/// Minimum sample size for the chi-square certifications.
pub const MIN_RUNTIMES: usize = 1_000;

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub test: String,
    pub statistic: f64,
    pub threshold: f64,
    pub pvalue: Option<f64>,
    pub pass: bool,
    pub n: usize,
    pub seed: Option<u64>,
}

impl TestReport {
    /// Report that passes when `statistic <= threshold`.
    pub fn at_most(test: impl Into<String>, statistic: f64, threshold: f64, pvalue: Option<f64>, n: usize) -> Self {
        Self {
            test: test.into(),
            statistic,
            threshold,
            pvalue,
            pass: statistic <= threshold,
            n,
            seed: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn named(mut self, test: impl Into<String>) -> Self {
        self.test = test.into();
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// One human-readable line.
    pub fn line(&self) -> String {
        format!(
            "{} {}: statistic {:.6} threshold {:.6}{} (n = {})",
            if self.pass { "PASS" } else { "FAIL" },
            self.test,
            self.statistic,
            self.threshold,
            self.pvalue.map(|p| format!(" p = {p:.4}")).unwrap_or_default(),
            self.n
        )
    }
}

fn need(got: usize, need: usize) -> Result<()> {
    if got < need {
        Err(Error::InsufficientData { got, need })
    } else {
        Ok(())
    }
}

/// Chi-square goodness of fit of runtimes against `Geom(p)`.
///
/// Bins are `1..=K` with `K` the 99.9% quantile, plus a tail bin for `> K`;
/// neighbouring bins are merged until each expects at least 5 counts.
pub fn certify_runtime_law(runtimes: &[u64], p: f64) -> Result<TestReport> {
    need(runtimes.len(), MIN_RUNTIMES)?;
    let law = GeometricLaw::new(p)?;
    let n = runtimes.len();
    if runtimes.contains(&0) {
        return Err(Error::Domain("runtimes are counted from 1".into()));
    }
    let cutoff = law.quantile(0.999).max(1);
    let mut observed = vec![0.0; cutoff as usize + 1];
    for &t in runtimes {
        let bin = (t.min(cutoff + 1) - 1) as usize;
        observed[bin] += 1.0;
    }
    let mut expected: Vec<f64> = (1..=cutoff).map(|k| n as f64 * law.pmf(k).expect("k >= 1")).collect();
    expected.push(n as f64 * law.survival(cutoff));
    let (stat, df) = stats::pearson(&observed, &expected, 5.0);
    let pvalue = stats::chi_square_sf(stat, df);
    Ok(TestReport::at_most(
        format!("runtime_law_geom_{p}"),
        stat,
        stats::chi_square_critical(df, TEST_LEVEL),
        Some(pvalue),
        n,
    ))
}

/// Two-sample chi-square homogeneity test on runtime counts.
///
/// Consecutive runtime values are pooled until each bin holds at least 10
/// observations across both samples; the remainder forms a tail bin.
pub fn certify_independence(runtimes_a: &[u64], runtimes_b: &[u64]) -> Result<TestReport> {
    need(runtimes_a.len(), MIN_RUNTIMES)?;
    need(runtimes_b.len(), MIN_RUNTIMES)?;
    let mut counts: BTreeMap<u64, (f64, f64)> = BTreeMap::new();
    for &t in runtimes_a {
        counts.entry(t).or_default().0 += 1.0;
    }
    for &t in runtimes_b {
        counts.entry(t).or_default().1 += 1.0;
    }
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (a, b) in counts.values() {
        acc.0 += a;
        acc.1 += b;
        if acc.0 + acc.1 >= 10.0 {
            bins.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.0 + acc.1 > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => bins.push(acc),
        }
    }
    let (na, nb) = (runtimes_a.len() as f64, runtimes_b.len() as f64);
    let total = na + nb;
    let stat: f64 = bins
        .iter()
        .map(|(a, b)| {
            let col = a + b;
            let ea = na * col / total;
            let eb = nb * col / total;
            (a - ea).powi(2) / ea + (b - eb).powi(2) / eb
        })
        .sum();
    let df = bins.len().saturating_sub(1);
    Ok(TestReport::at_most(
        "runtime_independence",
        stat,
        stats::chi_square_critical(df, TEST_LEVEL),
        Some(stats::chi_square_sf(stat, df)),
        runtimes_a.len().min(runtimes_b.len()),
    ))
}

/// Empirical and exact log pmf ratio at one runtime value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogRatioPoint {
    pub k: u64,
    pub exact: f64,
    pub empirical: Option<f64>,
}

/// Result of the runtime timing attack between two databases.
#[derive(Debug, Clone)]
pub struct AttackReport {
    pub p: f64,
    pub q: f64,
    pub r: RBound,
    pub exact: TradeoffCurve,
    pub empirical: TradeoffCurve,
    pub f_r: TradeoffCurve,
    /// `sup |empirical - exact|` on a 1001-point grid.
    pub empirical_gap: f64,
    /// `min (exact - f_R)` over a grid and the exact vertices; never below 0 up to rounding.
    pub min_slack: f64,
    /// `max (exact - f_R)` over the same points.
    pub max_gap: f64,
    pub log_ratios: Vec<LogRatioPoint>,
}

const ATTACK_GRID: usize = 1000;

/// Exact and plug-in tradeoff curves of threshold tests on runtimes, with
/// the `f_R` bound for `R = log(1-p)/log(1-q)` overlaid.
///
/// The test rejects database `a` when the runtime is at least `t`, so
/// `alpha = P_a(T >= t)` and `beta = P_b(T < t)`. Tests in the opposite
/// direction are included so the empirical curve is symmetric in `p`, `q`.
pub fn attack_tradeoff(runtimes_a: &[u64], runtimes_b: &[u64], p: f64, q: f64) -> Result<AttackReport> {
    need(runtimes_a.len(), 1)?;
    need(runtimes_b.len(), 1)?;
    let exact = exact_geometric_tradeoff(p, q)?;
    let r = RBound::from_acceptance(p, q)?;
    let bound = f_r_curve(r, ATTACK_GRID)?;

    let mut a = runtimes_a.to_vec();
    let mut b = runtimes_b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let top = a.last().copied().max(b.last().copied()).unwrap_or(1) + 1;
    let mut points = Vec::with_capacity(2 * top as usize);
    for t in 1..=top {
        let a_below = a.partition_point(|x| *x < t) as f64 / na;
        let b_below = b.partition_point(|x| *x < t) as f64 / nb;
        points.push((1.0 - a_below, b_below));
        points.push((a_below, 1.0 - b_below));
    }
    let empirical = TradeoffCurve::lower_hull(&points)?;

    let mut min_slack = f64::INFINITY;
    let mut max_gap = f64::NEG_INFINITY;
    let alphas = (0..=ATTACK_GRID)
        .map(|i| i as f64 / ATTACK_GRID as f64)
        .chain(exact.vertices().iter().map(|v| v.0));
    for alpha in alphas {
        let gap = exact.eval(alpha) - f_r(r, alpha);
        min_slack = min_slack.min(gap);
        max_gap = max_gap.max(gap);
    }

    let law_p = GeometricLaw::new(p)?;
    let law_q = GeometricLaw::new(q)?;
    let log_ratios = (1..top)
        .map(|k| {
            let ca = a.partition_point(|x| *x <= k) - a.partition_point(|x| *x < k);
            let cb = b.partition_point(|x| *x <= k) - b.partition_point(|x| *x < k);
            let empirical = (ca > 0 && cb > 0).then(|| (ca as f64 / na).ln() - (cb as f64 / nb).ln());
            LogRatioPoint {
                k,
                exact: law_p.log_pmf(k).expect("k >= 1") - law_q.log_pmf(k).expect("k >= 1"),
                empirical,
            }
        })
        .collect();

    Ok(AttackReport {
        p,
        q,
        r,
        empirical_gap: empirical.sup_distance(&exact, ATTACK_GRID),
        exact,
        empirical,
        f_r: bound,
        min_slack,
        max_gap,
        log_ratios,
    })
}

impl AttackReport {
    /// `alpha,beta,source` rows for the three curves.
    pub fn curves_csv(&self) -> String {
        let mut out = String::from("alpha,beta,source\n");
        for (name, curve) in [("exact", &self.exact), ("empirical", &self.empirical), ("f_R", &self.f_r)] {
            for (a, b) in curve.vertices() {
                out.push_str(&format!("{},{},{name}\n", fmt_float(*a), fmt_float(*b)));
            }
        }
        out
    }

    pub fn log_ratio_csv(&self) -> String {
        let mut out = String::from("k,exact,empirical\n");
        for pt in &self.log_ratios {
            out.push_str(&format!(
                "{},{},{}\n",
                pt.k,
                fmt_float(pt.exact),
                pt.empirical.map(fmt_float).unwrap_or_default()
            ));
        }
        out
    }
}

/// Float formatting used in every CSV: 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// One cell of the `eps(delta)` table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Table1Row {
    pub r: f64,
    pub delta: f64,
    pub eps: f64,
}

pub const TABLE1_R: [f64; 2] = [2.0, 1.1];
pub const TABLE1_DELTA: [f64; 6] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

/// `eps(delta)` for `R` in {2, 1.1} and `delta` from 1e-1 down to 1e-6.
pub fn reproduce_table1() -> Vec<Table1Row> {
    TABLE1_R
        .iter()
        .flat_map(|&r| {
            TABLE1_DELTA.iter().map(move |&delta| Table1Row {
                r,
                delta,
                eps: eps_of_delta(RBound::new(r).expect("R >= 1"), delta).expect("delta in (0, 1)"),
            })
        })
        .collect()
}

pub fn table1_csv(rows: &[Table1Row]) -> String {
    let mut out = String::from("R,delta,eps\n");
    for row in rows {
        out.push_str(&format!("{},{},{}\n", fmt_float(row.r), fmt_float(row.delta), fmt_float(row.eps)));
    }
    out
}

/// The two `(p, q)` pairs with `1 - p = (1 - q)^2`, so `R = 2` for both.
pub const FIGURE2_PAIRS: [(f64, f64); 2] = [(0.19, 0.1), (0.84, 0.6)];

/// Exact tradeoff and `f_R` curves for each pair, as `(q, csv)`.
pub fn figure2_csvs() -> Result<Vec<(f64, String)>> {
    FIGURE2_PAIRS
        .iter()
        .map(|&(p, q)| {
            let exact = exact_geometric_tradeoff(p, q)?;
            let r = RBound::from_acceptance(p, q)?;
            let bound = f_r_curve(r, ATTACK_GRID)?;
            let mut out = String::from("alpha,beta,source\n");
            for (name, c) in [("exact", &exact), ("f_R", &bound)] {
                for (a, b) in c.vertices() {
                    out.push_str(&format!("{},{},{name}\n", fmt_float(*a), fmt_float(*b)));
                }
            }
            Ok((q, out))
        })
        .collect()
}

/// Runs `f` for `n` replicates in parallel; replicate `i` uses stream `i`
/// of `seed`, so results do not depend on scheduling.
pub fn replicate<T, F>(seed: u64, n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut RngStream) -> Result<T> + Sync,
{
    (0..n as u64)
        .into_par_iter()
        .map(|i| f(&mut RngStream::new(seed, i)))
        .collect()
}
