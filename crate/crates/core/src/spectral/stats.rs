use serde::Serialize;

use crate::error::{Error, Result};

/// One-sample Kolmogorov-Smirnov statistic `sup |F_n - F|`.
pub fn ks_distance(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let c = cdf(x);
            (c - i as f64 / n).max((i + 1) as f64 / n - c)
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailIndex {
    pub estimate: f64,
    pub std_error: f64,
    pub k: usize,
}

/// Default number of order statistics: `sqrt(n)` clamped to `[50, n/10]`.
pub fn default_hill_k(n: usize) -> usize {
    let root = (n as f64).sqrt().round() as usize;
    root.max(50).min(n / 10)
}

/// Hill estimator of the tail index of `|values|` from the `k` largest
/// order statistics; standard error `estimate / sqrt(k)`.
pub fn tail_index(values: &[f64], k: Option<usize>) -> Result<TailIndex> {
    let mut mags: Vec<f64> = values.iter().map(|v| v.abs()).filter(|v| v.is_finite()).collect();
    let k = k.unwrap_or_else(|| default_hill_k(mags.len()));
    if k == 0 || k >= mags.len() {
        return Err(Error::Invalid(format!("Hill estimator needs 0 < k < n, got k={k}, n={}", mags.len())));
    }
    mags.sort_by(|a, b| b.total_cmp(a));
    let threshold = mags[k];
    if !(threshold > 0.0) {
        return Err(Error::Invalid("Hill threshold order statistic is zero".into()));
    }
    let mean_log = mags[..k].iter().map(|x| (x / threshold).ln()).sum::<f64>() / k as f64;
    let estimate = 1.0 / mean_log;
    Ok(TailIndex { estimate, std_error: estimate / (k as f64).sqrt(), k })
}

/// Least-squares slope of `ln y` against `ln x` over the points with both
/// coordinates positive.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let pts: Vec<(f64, f64)> =
        xs.iter().zip(ys).filter(|(x, y)| **x > 0.0 && **y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return Err(Error::Invalid("log-log fit needs two positive points".into()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}
