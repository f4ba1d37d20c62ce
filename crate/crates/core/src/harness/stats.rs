//! Goodness-of-fit statistics used by the certification routines.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Upper tail `P(X > stat)` for a chi-square with `df` degrees of freedom.
/// With `df = 0` the statistic is identically zero and the p-value is 1.
pub fn chi_square_sf(stat: f64, df: usize) -> f64 {
    if df == 0 {
        return 1.0;
    }
    ChiSquared::new(df as f64).expect("positive df").sf(stat)
}

/// Critical value `x` with `P(X > x) = level`.
pub fn chi_square_critical(df: usize, level: f64) -> f64 {
    if df == 0 {
        return 0.0;
    }
    ChiSquared::new(df as f64).expect("positive df").inverse_cdf(1.0 - level)
}

/// Pearson statistic and degrees of freedom after merging adjacent bins whose
/// expected count falls below `min_expected`.
pub fn pearson(observed: &[f64], expected: &[f64], min_expected: f64) -> (f64, usize) {
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (o, e) in observed.iter().zip(expected) {
        acc.0 += o;
        acc.1 += e;
        if acc.1 >= min_expected {
            bins.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.0 > 0.0 || acc.1 > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => bins.push(acc),
        }
    }
    let stat = bins
        .iter()
        .map(|(o, e)| if *e > 0.0 { (o - e).powi(2) / e } else if *o > 0.0 { f64::INFINITY } else { 0.0 })
        .sum();
    (stat, bins.len().saturating_sub(1))
}

/// Asymptotic Kolmogorov tail `P(K > lambda)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample KS statistic and p-value against a continuous CDF.
pub fn ks_one_sample(samples: &[f64], cdf: impl Fn(f64) -> f64) -> (f64, f64) {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let f = cdf(*x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max);
    let sn = n.sqrt();
    (d, kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d))
}

/// Two-sample KS statistic and p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = (na * nb / (na + nb)).sqrt();
    (d, kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d))
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}
