//! Acceptance gate: ten criteria, one PASS/FAIL line each.
//!
//! Reference values are computed here from first principles (closed forms,
//! brute-force convolution, numerical integration) and compared with the
//! library at the stated tolerances. Every run uses fixed seeds.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use dp_rejection::accounting::{
    batched_r, curve_to_eps_delta, delta_of_eps, eps_of_delta, exact_geometric_tradeoff, exp_mech_r, f_eps_delta,
    f_r, geom_max_divergence, EpsDelta, RBound, TradeoffCurve,
};
use dp_rejection::adaptive::{
    adaptive_sample, adaptive_sample_with, AdaptiveOptions, AdaptiveSampler, GridLayout, LogHolderTarget, Schedule,
};
use dp_rejection::distributions::{GaussianLaw, GeometricLaw, RngStream, UniformBox};
use dp_rejection::harness::targets::{ridge_demo_spec, BuiltinTarget, Prepared};
use dp_rejection::harness::{certify_independence, certify_runtime_law, reproduce_table1};
use dp_rejection::samplers::{
    additive_wait_reject, squeeze_reject, truncated_reject, truncation_length, Envelope, Support,
    UnnormalizedTarget,
};
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ratio_r(r: f64) -> RBound {
    RBound::new(r).unwrap()
}

// closed-form f_R written out branch by branch
fn oracle_f_r(r: f64, a: f64) -> f64 {
    if r == 1.0 {
        return 1.0 - a;
    }
    let a1 = r.powf(r / (1.0 - r));
    let a2 = 1.0 - r.powf(1.0 / (1.0 - r));
    if a <= a1 {
        1.0 - a.powf(1.0 / r)
    } else if a <= a2 {
        a1 + a2 - a
    } else {
        (1.0 - a).powf(r)
    }
}

fn geom_pmf(p: f64, k: u64) -> f64 {
    p * (1.0 - p).powi(k as i32 - 1)
}

/// Pearson test of runtimes against Geom(p): bins 1..K while the expected
/// count is at least 5, one tail bin for the rest.
fn oracle_geometric_pvalue(runtimes: &[u64], p: f64) -> f64 {
    let n = runtimes.len() as f64;
    let mut k_max = 1u64;
    while n * geom_pmf(p, k_max + 1) >= 5.0 && n * (1.0 - p).powi(k_max as i32 + 1) >= 5.0 {
        k_max += 1;
    }
    let mut obs = vec![0.0; k_max as usize + 1];
    for &t in runtimes {
        obs[(t.min(k_max + 1) - 1) as usize] += 1.0;
    }
    let mut stat = 0.0;
    for k in 1..=k_max {
        let e = n * geom_pmf(p, k);
        stat += (obs[k as usize - 1] - e).powi(2) / e;
    }
    let e_tail = n * (1.0 - p).powi(k_max as i32);
    stat += (obs[k_max as usize] - e_tail).powi(2) / e_tail;
    ChiSquared::new(k_max as f64).unwrap().sf(stat)
}

/// Two-sample homogeneity test with bins 1..K holding at least 20 pooled
/// observations each and a tail bin.
fn oracle_homogeneity_pvalue(a: &[u64], b: &[u64]) -> f64 {
    let top = *a.iter().chain(b).max().unwrap() as usize;
    let mut ca = vec![0.0; top + 2];
    let mut cb = vec![0.0; top + 2];
    for &t in a {
        ca[t as usize] += 1.0;
    }
    for &t in b {
        cb[t as usize] += 1.0;
    }
    let mut bins = Vec::new();
    let mut acc = (0.0, 0.0);
    for k in 0..ca.len() {
        acc.0 += ca[k];
        acc.1 += cb[k];
        if acc.0 + acc.1 >= 20.0 {
            bins.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if let Some(last) = bins.last_mut() {
        last.0 += acc.0;
        last.1 += acc.1;
    }
    if bins.len() < 2 {
        return 1.0;
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let stat: f64 = bins
        .iter()
        .map(|(x, y)| {
            let ea = na * (x + y) / (na + nb);
            let eb = nb * (x + y) / (na + nb);
            (x - ea).powi(2) / ea + (y - eb).powi(2) / eb
        })
        .sum();
    ChiSquared::new((bins.len() - 1) as f64).unwrap().sf(stat)
}

/// KS distance between sorted samples and a CDF evaluated at those samples.
fn ks_distance(sorted_cdf: &[f64]) -> f64 {
    let n = sorted_cdf.len() as f64;
    sorted_cdf
        .iter()
        .enumerate()
        .map(|(i, f)| (f - i as f64 / n).max((i + 1) as f64 / n - f))
        .fold(0.0, f64::max)
}

/// CDF of N(0, var) at sorted points, by Simpson's rule on each gap.
fn normal_cdf_sorted(sorted: &[f64], var: f64) -> Vec<f64> {
    let dens = |x: f64| (-x * x / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt();
    let simpson = |a: f64, b: f64| {
        let pieces = 16;
        let h = (b - a) / pieces as f64;
        let mut s = dens(a) + dens(b);
        for i in 1..pieces {
            s += dens(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    };
    // start from the exact tail mass below -12 sd, which is below 1e-30
    let mut x = -12.0 * var.sqrt();
    let mut acc = 0.0;
    sorted
        .iter()
        .map(|&v| {
            if v > x {
                let mut lo = x;
                while lo < v {
                    let hi = (lo + 0.25).min(v);
                    acc += simpson(lo, hi);
                    lo = hi;
                }
                x = v;
            }
            acc
        })
        .collect()
}

fn crit1_table() -> Outcome {
    let published = [
        (2.0, [0.916, 3.22, 5.52, 7.82, 10.13, 12.43]),
        (1.1, [0.0, 0.125, 0.356, 0.59, 0.82, 1.05]),
    ];
    let rows = reproduce_table1();
    check(rows.len() == 12, format!("expected 12 rows, got {}", rows.len()))?;
    let mut worst = 0.0f64;
    for (i, (r, vals)) in published.iter().enumerate() {
        for (j, want) in vals.iter().enumerate() {
            let row = &rows[i * 6 + j];
            let delta = 10f64.powi(-(j as i32 + 1));
            check(
                row.r == *r && (row.delta - delta).abs() < 1e-18,
                format!("row {} is for R = {}, delta = {}", i * 6 + j, row.r, row.delta),
            )?;
            // closed form, clamped at zero
            let oracle = ((1.0 / r).ln() + (r - 1.0) * ((1.0 / delta).ln() + (1.0 - 1.0 / r).ln())).max(0.0);
            check((row.eps - oracle).abs() < 1e-12, format!("R = {r}, delta = {delta}: {} vs closed form {oracle}", row.eps))?;
            worst = worst.max((row.eps - want).abs());
            check((row.eps - want).abs() <= 0.005, format!("R = {r}, delta = {delta}: {} vs {want}", row.eps))?;
        }
    }
    check(rows[6].eps == 0.0, "R = 1.1, delta = 0.1 is not clamped to 0")?;
    Ok(format!("12 entries, worst deviation {worst:.4}"))
}

fn crit2_f_r() -> Outcome {
    let grid: Vec<f64> = (0..=1000).map(|i| i as f64 / 1000.0).collect();
    let deltas = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
    for r in [1.01, 1.1, 2.0, 5.0, 20.0] {
        let rb = ratio_r(r);
        let (a1, a2) = rb.breakpoints();
        check((a1 - r.powf(r / (1.0 - r))).abs() < 1e-15, format!("R = {r}: first breakpoint"))?;
        check((a2 - (1.0 - r.powf(1.0 / (1.0 - r)))).abs() < 1e-15, format!("R = {r}: second breakpoint"))?;
        for b in [a1, a2] {
            let h = 1e-13;
            let jump = (f_r(rb, b - h) - f_r(rb, b + h)).abs();
            check(jump < 1e-12, format!("R = {r}: jump {jump:e} at breakpoint {b}"))?;
            let left = if b == a1 { 1.0 - b.powf(1.0 / r) } else { a1 + a2 - b };
            let right = if b == a1 { a1 + a2 - b } else { (1.0 - b).powf(r) };
            check((left - right).abs() < 1e-12, format!("R = {r}: branches disagree at {b}"))?;
        }
        let vals: Vec<f64> = grid.iter().map(|a| f_r(rb, *a)).collect();
        for (a, v) in grid.iter().zip(&vals) {
            check((v - oracle_f_r(r, *a)).abs() < 1e-12, format!("R = {r}: f_R({a}) = {v}"))?;
            let back = f_r(rb, *v);
            check((back - a).abs() < 1e-9, format!("R = {r}: f(f({a})) = {back}"))?;
        }
        for w in vals.windows(2) {
            check(w[1] <= w[0] + 1e-15, format!("R = {r}: not non-increasing"))?;
        }
        for w in vals.windows(3) {
            check(w[0] + w[2] - 2.0 * w[1] >= -1e-12, format!("R = {r}: not convex"))?;
        }
        for delta in deltas {
            let eps = eps_of_delta(rb, delta).map_err(|e| e.to_string())?;
            let ed = EpsDelta::new(eps, delta).map_err(|e| e.to_string())?;
            for a in &grid {
                let gap = f_r(rb, *a) - f_eps_delta(ed, *a);
                check(gap >= -1e-12, format!("R = {r}, delta = {delta}: supporting line above f_R at {a} by {}", -gap))?;
            }
            if eps > 0.0 {
                let back = delta_of_eps(rb, eps).map_err(|e| e.to_string())?;
                check((back - delta).abs() <= 1e-12 * delta.max(1e-300) * 1e3, format!("R = {r}: delta round trip {back} vs {delta}"))?;
            }
        }
    }
    let target = EpsDelta::new(1.0, 0.127).unwrap();
    let curve = TradeoffCurve::from_fn(|a| f_eps_delta(target, a), 10_000, &[]).map_err(|e| e.to_string())?;
    let back = curve_to_eps_delta(&curve, 1.0).map_err(|e| e.to_string())?;
    check((back.delta - 0.127).abs() < 1e-6, format!("tangent-line round trip gives {}", back.delta))?;
    Ok("continuity, shape, symmetry and supporting lines hold for R in {1.01, 1.1, 2, 5, 20}".into())
}

fn crit3_figure2() -> Outcome {
    let mut gaps = Vec::new();
    for (q, p) in [(0.1f64, 1.0 - 0.9f64.powi(2)), (0.6f64, 1.0 - 0.4f64.powi(2))] {
        let r = (1.0 - p).ln() / (1.0 - q).ln();
        check((r - 2.0).abs() < 1e-12, format!("q = {q}: R = {r}"))?;
        let curve = exact_geometric_tradeoff(p, q).map_err(|e| e.to_string())?;
        let mut points: Vec<f64> = (0..=10_000).map(|i| i as f64 / 10_000.0).collect();
        points.extend(curve.vertices().iter().map(|v| v.0));
        let mut gap = f64::NEG_INFINITY;
        for a in points {
            let v = curve.eval(a);
            if a >= 1e-6 {
                // Neyman-Pearson: reject Geom(p) for large runtimes, randomize at the boundary
                let t = (a.ln() / (1.0 - p).ln()).floor();
                let (hi_a, lo_a) = ((1.0 - p).powf(t), (1.0 - p).powf(t + 1.0));
                let (hi_b, lo_b) = (1.0 - (1.0 - q).powf(t), 1.0 - (1.0 - q).powf(t + 1.0));
                let w = if hi_a > lo_a { (hi_a - a) / (hi_a - lo_a) } else { 0.0 };
                let oracle = hi_b + w * (lo_b - hi_b);
                check((v - oracle).abs() < 1e-12, format!("q = {q}: exact curve {v} vs {oracle} at {a}"))?;
            }
            let slack = v - oracle_f_r(2.0, a);
            check(slack >= -1e-12, format!("q = {q}: below f_R by {} at {a}", -slack))?;
            gap = gap.max(slack);
        }
        gaps.push(gap);
    }
    check(gaps[0] < gaps[1], format!("max gap at q = 0.1 ({}) not below q = 0.6 ({})", gaps[0], gaps[1]))?;
    Ok(format!("both curves dominate f_2; max gap {:.4} (q = 0.1) < {:.4} (q = 0.6)", gaps[0], gaps[1]))
}

fn crit4_memoryless() -> Outcome {
    let (p, q) = (0.2f64, 0.5f64);
    // runtime T ~ Geom(q); publish now w.p. p/q, else add W ~ Geom(p)
    let mut worst = 0.0f64;
    for k in 1..=100u64 {
        let mut total = geom_pmf(q, k) * (p / q);
        for j in 1..k {
            total += geom_pmf(q, j) * (1.0 - p / q) * geom_pmf(p, k - j);
        }
        worst = worst.max((total - geom_pmf(p, k)).abs());
    }
    check(worst < 1e-12, format!("convolution differs from Geom(p) by {worst:e}"))?;

    // normalized N(0,1) against itself with c_D = 2 accepts w.p. 1/2
    let law = GaussianLaw::new(vec![0.0], 1.0).unwrap();
    let l2 = law.clone();
    let target = UnnormalizedTarget::new(1, move |x| l2.logpdf(x));
    let env = Envelope::new(Arc::new(law), 2f64.ln());
    let n = 100_000u64;
    let runtimes: Vec<u64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(4004, i);
            additive_wait_reject(&target, &env, 1.0 / q, 1.0 / p, &mut rng).unwrap().runtime
        })
        .collect();
    let mut counts = vec![0.0; 61];
    for t in &runtimes {
        if *t <= 60 {
            counts[*t as usize] += 1.0;
        }
    }
    let tv: f64 = 0.5
        * (1..=60u64)
            .map(|k| (counts[k as usize] / n as f64 - geom_pmf(p, k)).abs())
            .sum::<f64>();
    check(tv < 0.01, format!("empirical TV {tv:.4}"))?;
    Ok(format!("convolution error {worst:.1e}, empirical TV {tv:.4} at 1e5 runs"))
}

fn crit5_squeeze() -> Outcome {
    let prep = BuiltinTarget::GaussianDemo.prepare().map_err(|e| e.to_string())?;
    let ratio = prep.envelope.squeeze_ratio().unwrap();
    check((ratio - 0.5).abs() < 1e-15, format!("c_L/c_U = {ratio}"))?;
    let n = 100_000u64;
    let traces: Vec<(f64, u64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(5005, i);
            let t = squeeze_reject(&prep.target, &prep.envelope, &mut rng).unwrap();
            (t.value[0], t.runtime)
        })
        .collect();
    let mut xs: Vec<f64> = traces.iter().map(|t| t.0).collect();
    xs.sort_by(f64::total_cmp);
    let d = ks_distance(&normal_cdf_sorted(&xs, 0.5));
    check(d < 0.01, format!("(a) KS statistic {d:.5}"))?;

    let runtimes: Vec<u64> = traces.iter().map(|t| t.1).collect();
    let pv = oracle_geometric_pvalue(&runtimes, 0.5);
    check(pv > 1e-3, format!("(b) runtime chi-square p = {pv:.2e}"))?;
    let lib = certify_runtime_law(&runtimes, 0.5).map_err(|e| e.to_string())?;
    check(lib.pass, format!("(b) library certification failed: {}", lib.line()))?;

    let a = Prepared::from_erm(&ridge_demo_spec(false)).map_err(|e| e.to_string())?;
    let b = Prepared::from_erm(&ridge_demo_spec(true)).map_err(|e| e.to_string())?;
    check(
        a.envelope.squeeze_ratio() == b.envelope.squeeze_ratio(),
        "(c) adjacent databases have different envelope ratios",
    )?;
    let run = |prep: &Prepared, seed: u64| -> Vec<u64> {
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut rng = RngStream::new(seed, i);
                squeeze_reject(&prep.target, &prep.envelope, &mut rng).unwrap().runtime
            })
            .collect()
    };
    let ra = run(&a, 5105);
    let rb = run(&b, 5205);
    let pv_c = oracle_homogeneity_pvalue(&ra, &rb);
    check(pv_c > 1e-3, format!("(c) two-sample p = {pv_c:.2e}"))?;
    let lib = certify_independence(&ra, &rb).map_err(|e| e.to_string())?;
    check(lib.pass, format!("(c) library certification failed: {}", lib.line()))?;
    Ok(format!("(a) KS {d:.4}; (b) p = {pv:.3}; (c) p = {pv_c:.3}"))
}

fn crit6_truncated() -> Outcome {
    // 0.2 x on [0, 1] under the uniform proposal with c_U = 1: acceptance 0.1
    let target = UnnormalizedTarget::new(1, |x| (0.2 * x[0]).ln()).with_support(Support::Box {
        lower: vec![0.0],
        upper: vec![1.0],
    });
    let env = Envelope::new(Arc::new(UniformBox::unit(1).unwrap()), 0.0);
    let (alpha0, delta) = (0.1, 1e-3);
    let n_iter = truncation_length(alpha0, delta).map_err(|e| e.to_string())?;
    check(n_iter == 66, format!("N = {n_iter}"))?;
    check(0.9f64.powi(66) <= delta && 0.9f64.powi(65) > delta, "66 is not the smallest N")?;
    let n = 100_000u64;
    let out: Vec<(u64, bool)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(6006, i);
            let t = truncated_reject(&target, &env, alpha0, delta, &mut rng).unwrap();
            (t.runtime, t.accepted)
        })
        .collect();
    let off = out.iter().filter(|o| o.0 != 66).count();
    check(off == 0, format!("{off} runs with runtime other than 66"))?;
    let none = out.iter().filter(|o| !o.1).count() as f64 / n as f64;
    let bound = delta + 3.0 * (delta * (1.0 - delta) / n as f64).sqrt();
    check(none <= bound, format!("none-accepted frequency {none} above {bound}"))?;
    Ok(format!("N = 66 on every run; none-accepted frequency {none:.5} <= {bound:.5}"))
}

fn example_g(x: f64) -> f64 {
    -3.0 * (x - 0.5).abs() + 0.2 * (20.0 * x).sin()
}

fn crit7_adaptive() -> Outcome {
    let target = LogHolderTarget::unit(1, 1.0, 7.0, |x| example_g(x[0])).map_err(|e| e.to_string())?;

    // (a) publish frequency per fixed level
    let levels = Schedule::Levels {
        levels: vec![(1, 5), (100_001, 15), (200_001, 45)],
    };
    let mut sampler = AdaptiveSampler::new(&target, &levels, AdaptiveOptions::default());
    let mut rng = RngStream::new(7007, 0);
    for _ in 0..300_000 {
        sampler.step(&mut rng).map_err(|e| e.to_string())?;
    }
    let mut lines = Vec::new();
    for lvl in sampler.levels() {
        let r_hat = 7.0 / (2.0 * lvl.m as f64);
        check((lvl.r_hat - r_hat).abs() < 1e-12, format!("(a) m = {}: r_hat {}", lvl.m, lvl.r_hat))?;
        check(lvl.iterations >= 100_000, format!("(a) m = {}: only {} iterations", lvl.m, lvl.iterations))?;
        let freq = lvl.publishes as f64 / lvl.iterations as f64;
        let want = (-2.0 * r_hat).exp();
        check((freq - want).abs() <= 0.01, format!("(a) m = {}: frequency {freq} vs {want}", lvl.m))?;
        lines.push(format!("m={} {freq:.4}/{want:.4}", lvl.m));
    }
    let endpoint = Schedule::Fixed { m: 5 };
    let opts = AdaptiveOptions {
        layout: GridLayout::Endpoint,
        ..AdaptiveOptions::default()
    };
    let mut s2 = AdaptiveSampler::new(&target, &endpoint, opts);
    for _ in 0..100_000 {
        s2.step(&mut rng).map_err(|e| e.to_string())?;
    }
    let lvl = &s2.levels()[0];
    let freq = lvl.publishes as f64 / lvl.iterations as f64;
    check((lvl.r_hat - 0.875).abs() < 1e-12, "(a) endpoint grid radius is not 7/8")?;
    check((freq - (-1.75f64).exp()).abs() <= 0.01, format!("(a) endpoint m = 5: frequency {freq}"))?;

    // (b) exactness against a trapezoid-normalized CDF
    let mut rng = RngStream::new(7107, 0);
    let run = adaptive_sample(&target, 100_000, &Schedule::doubling(4), &mut rng).map_err(|e| e.to_string())?;
    let m = 100_000usize;
    let f: Vec<f64> = (0..=m).map(|i| example_g(i as f64 / m as f64).exp()).collect();
    let mut cum = vec![0.0; m + 1];
    for i in 1..=m {
        cum[i] = cum[i - 1] + 0.5 * (f[i - 1] + f[i]) / m as f64;
    }
    let z = cum[m];
    let cdf = |x: f64| {
        let pos = (x * m as f64).clamp(0.0, m as f64);
        let i = (pos.floor() as usize).min(m - 1);
        let w = pos - i as f64;
        (cum[i] + w * (cum[i + 1] - cum[i])) / z
    };
    let mut xs: Vec<f64> = run.samples.iter().map(|v| v[0]).collect();
    xs.sort_by(f64::total_cmp);
    let d = ks_distance(&xs.iter().map(|x| cdf(*x)).collect::<Vec<_>>());
    check(d < 0.01, format!("(b) KS statistic {d:.5}"))?;

    // (c) two 7-Lipschitz targets, same schedule, independent replicate runs
    let other = LogHolderTarget::unit(1, 1.0, 7.0, |x| 0.5 * (14.0 * x[0]).sin() - 1.0).map_err(|e| e.to_string())?;
    let sched = Schedule::Levels {
        levels: vec![(1, 5), (4, 15), (16, 45)],
    };
    let quiet = AdaptiveOptions {
        check_levels: false,
        ..AdaptiveOptions::default()
    };
    let reps = 20_000u64;
    let collect = |t: &LogHolderTarget, seed: u64| -> Result<(Vec<u64>, Vec<u64>), String> {
        let runs: Vec<Vec<u64>> = (0..reps)
            .into_par_iter()
            .map(|i| {
                let mut rng = RngStream::new(seed, i);
                adaptive_sample_with(t, 10, &sched, quiet, &mut rng).map(|r| r.runtimes).map_err(|e| e.to_string())
            })
            .collect::<Result<_, _>>()?;
        Ok((runs.iter().map(|r| r[0]).collect(), runs.iter().map(|r| r[9]).collect()))
    };
    let (first_a, last_a) = collect(&target, 7207)?;
    let (first_b, last_b) = collect(&other, 7307)?;
    let p_first = oracle_homogeneity_pvalue(&first_a, &first_b);
    let p_last = oracle_homogeneity_pvalue(&last_a, &last_b);
    check(p_first > 1e-3, format!("(c) first inter-publish runtime p = {p_first:.2e}"))?;
    check(p_last > 1e-3, format!("(c) tenth inter-publish runtime p = {p_last:.2e}"))?;
    Ok(format!(
        "(a) {}; (b) KS {d:.4}; (c) p = {p_first:.3}, {p_last:.3}",
        lines.join(", ")
    ))
}

fn crit8_no_pure_dp() -> Outcome {
    let (p, q) = (0.19f64, 0.1f64);
    let lp = GeometricLaw::new(p).unwrap();
    let lq = GeometricLaw::new(q).unwrap();
    let ratio = |k: u64| lp.log_pmf(k).unwrap() - lq.log_pmf(k).unwrap();
    let mut sup = 0.0f64;
    for k in 1..=1000u64 {
        let brute = (geom_pmf(p, k) / geom_pmf(q, k)).ln();
        let exact = (p / q).ln() + (k - 1) as f64 * ((1.0 - p) / (1.0 - q)).ln();
        check((ratio(k) - exact).abs() < 1e-9, format!("log ratio at k = {k}"))?;
        if k <= 200 {
            check((brute - exact).abs() < 1e-9, format!("brute-force ratio at k = {k}"))?;
        }
        sup = sup.max(ratio(k).abs());
    }
    let slope = (ratio(1000) - ratio(1)) / 999.0;
    let want = (0.81f64 / 0.9).ln();
    check((slope - want).abs() < 1e-12, format!("slope {slope} vs {want}"))?;
    check(sup > 100.0, format!("sup |log ratio| up to 1000 is only {sup}"))?;
    let fwd = geom_max_divergence(q, p).map_err(|e| e.to_string())?;
    check(fwd == f64::INFINITY, format!("D(Geom(0.1) || Geom(0.19)) = {fwd}"))?;
    let back = geom_max_divergence(p, q).map_err(|e| e.to_string())?;
    check((back - 1.9f64.ln()).abs() < 1e-12, format!("D(Geom(0.19) || Geom(0.1)) = {back}"))?;
    Ok(format!("slope {slope:.15}, sup over k <= 1000 is {sup:.1}, divergence is +inf"))
}

fn crit9_exp_mech() -> Outcome {
    for eps in [0.1f64, 0.5, 1.0, 2.0] {
        let mut prev = 0.0;
        for p in [1e-6, 0.1, 0.5, 0.9] {
            let r = exp_mech_r(eps, p).map_err(|e| e.to_string())?.value();
            let oracle = (1.0 - p).ln() / (1.0 - (-eps).exp() * p).ln();
            check((r - oracle).abs() < 1e-9 * oracle, format!("eps = {eps}, p* = {p}: {r} vs {oracle}"))?;
            check(r >= eps.exp() - 1e-12, format!("eps = {eps}, p* = {p}: {r} below e^eps"))?;
            check(r >= prev, format!("eps = {eps}: not monotone at p* = {p}"))?;
            prev = r;
        }
        let limit = exp_mech_r(eps, 1e-6).unwrap().value();
        check((limit - eps.exp()).abs() < 1e-4, format!("eps = {eps}: limit {limit}"))?;
    }
    Ok("R >= e^eps on the grid, increasing in p*, limit e^eps".into())
}

fn crit10_batching() -> Outcome {
    let pairs = [(0.19, 0.1), (0.5, 0.3), (0.9, 0.05), (0.01, 0.011), (0.999, 0.5)];
    let mut worst = 0.0f64;
    for (p, q) in pairs {
        let base = (1.0f64 - p).ln() / (1.0f64 - q).ln();
        for k in 1..=64u64 {
            let r = batched_r(p, q, k).map_err(|e| e.to_string())?;
            worst = worst.max((r - base).abs());
            check((r - base).abs() < 1e-12, format!("p = {p}, q = {q}, k = {k}: {r} vs {base}"))?;
        }
    }
    Ok(format!("worst deviation {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 table of eps(delta)", crit1_table, Duration::from_secs(1)),
        ("2 f_R properties", crit2_f_r, Duration::from_secs(5)),
        ("3 exact runtime tradeoff vs f_R", crit3_figure2, Duration::from_secs(1)),
        ("4 memoryless wait", crit4_memoryless, Duration::from_secs(10)),
        ("5 squeeze sampler", crit5_squeeze, Duration::from_secs(60)),
        ("6 truncated sampler", crit6_truncated, Duration::from_secs(60)),
        ("7 adaptive sampler", crit7_adaptive, Duration::from_secs(300)),
        ("8 runtime has no pure DP", crit8_no_pure_dp, Duration::from_secs(1)),
        ("9 exponential mechanism R", crit9_exp_mech, Duration::from_secs(1)),
        ("10 batching invariance", crit10_batching, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (name, f, limit) in criteria {
        let start = Instant::now();
        let res = f();
        let took = start.elapsed();
        let res = match res {
            Ok(msg) if took > limit => Err(format!("{msg}; took {took:.2?}, limit {limit:?}")),
            other => other,
        };
        match res {
            Ok(msg) => println!("criterion {name}: PASS ({took:.2?}) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {name}: FAIL ({took:.2?}) {msg}");
            }
        }
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
