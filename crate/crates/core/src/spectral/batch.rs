use std::f64::consts::PI;

use serde::Serialize;

use super::eigen::eigenvalues;
use super::histogram::{BinSpec, Histogram};
use crate::analytic::integrated_density;
use crate::error::{Error, Result};
use crate::params::EnsembleParams;
use crate::sampler::map_batch;

/// Sorted spectra of independent draws from one ensemble.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumBatch {
    pub spectra: Vec<Vec<f64>>,
    pub params: EnsembleParams,
    pub count: usize,
}

impl SpectrumBatch {
    /// Draws `count` matrices on streams `(seed, 0..count)` and diagonalizes
    /// them on the current rayon pool.
    pub fn generate(params: &EnsembleParams, seed: u64, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::Invalid("a spectrum batch needs at least one matrix".into()));
        }
        let spectra = map_batch(params, seed, count, |s| Ok(eigenvalues(&s.h)))?;
        Ok(SpectrumBatch { spectra, params: *params, count })
    }

    /// Wraps precomputed spectra; each is sorted on the way in.
    pub fn from_spectra(params: &EnsembleParams, mut spectra: Vec<Vec<f64>>) -> Result<Self> {
        if spectra.is_empty() {
            return Err(Error::Invalid("a spectrum batch needs at least one matrix".into()));
        }
        for s in &mut spectra {
            if s.len() != params.n() {
                return Err(Error::Invalid(format!("spectrum of length {} for N={}", s.len(), params.n())));
            }
            s.sort_by(f64::total_cmp);
        }
        let count = spectra.len();
        Ok(SpectrumBatch { spectra, params: *params, count })
    }

    pub fn levels(&self) -> impl Iterator<Item = f64> + '_ {
        self.spectra.iter().flatten().copied()
    }
}

/// Level-density histogram of the batch (integrates to `N`).
pub fn empirical_density(batch: &SpectrumBatch, bins: BinSpec) -> Result<Histogram> {
    Histogram::level_density(&batch.spectra, bins)
}

/// How `s(theta)` is attached to an empirical gap estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpacingScale {
    /// From the analytic level density of the batch's ensemble.
    Analytic,
    /// Mean number of sampled levels in `(-theta, theta)`.
    Empirical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapPoint {
    pub theta: f64,
    pub s: f64,
    pub e: f64,
    /// Binomial standard error of `e`.
    pub std_error: f64,
}

/// Fraction of spectra with no level in `(-theta, theta)`, for each `theta`.
pub fn empirical_gap(batch: &SpectrumBatch, theta_grid: &[f64], scale: SpacingScale) -> Result<Vec<GapPoint>> {
    let mut nearest: Vec<f64> =
        batch.spectra.iter().map(|s| s.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min)).collect();
    nearest.sort_by(f64::total_cmp);
    let mut levels: Vec<f64> = batch.levels().map(f64::abs).collect();
    levels.sort_by(f64::total_cmp);
    let m = batch.count as f64;
    theta_grid
        .iter()
        .map(|&theta| {
            if !(theta >= 0.0) {
                return Err(Error::Invalid(format!("theta must be >= 0, got {theta}")));
            }
            let empty = nearest.len() - nearest.partition_point(|&d| d < theta);
            let e = empty as f64 / m;
            let s = match scale {
                SpacingScale::Analytic => integrated_density(theta, &batch.params)?.value,
                SpacingScale::Empirical => levels.partition_point(|&d| d < theta) as f64 / m,
            };
            Ok(GapPoint { theta, s, e, std_error: (e * (1.0 - e) / m).sqrt() })
        })
        .collect()
}

/// Nearest-neighbour spacings from the central `window` fraction of each
/// spectrum, each spectrum scaled to unit mean spacing inside its window.
pub fn nn_spacings(batch: &SpectrumBatch, window: f64) -> Result<Vec<f64>> {
    if !(window > 0.0 && window <= 1.0) {
        return Err(Error::Invalid(format!("window must lie in (0, 1], got {window}")));
    }
    let n = batch.params.n();
    let keep = ((window * n as f64).round() as usize).clamp(2.min(n), n);
    if keep < 2 {
        return Err(Error::Invalid("spacings need at least two levels".into()));
    }
    let start = (n - keep) / 2;
    let mut out = Vec::with_capacity(batch.count * (keep - 1));
    for s in &batch.spectra {
        let w = &s[start..start + keep];
        let mean = (w[keep - 1] - w[0]) / (keep - 1) as f64;
        if mean > 0.0 {
            out.extend(w.windows(2).map(|p| (p[1] - p[0]) / mean));
        } else {
            out.extend(std::iter::repeat_n(1.0, keep - 1));
        }
    }
    Ok(out)
}

/// Histogram of [`nn_spacings`] as a probability density.
pub fn nn_spacing(batch: &SpectrumBatch, window: f64, bins: BinSpec) -> Result<Histogram> {
    Histogram::density(&nn_spacings(batch, window)?, bins)
}

pub fn wigner_surmise_pdf(s: f64) -> f64 {
    if s < 0.0 {
        0.0
    } else {
        0.5 * PI * s * (-0.25 * PI * s * s).exp()
    }
}

pub fn wigner_surmise_cdf(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        -(-0.25 * PI * s * s).exp_m1()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{gap_probability, level_density, semicircle_density};
    use crate::spectral::stats::{ks_distance, loglog_slope};

    #[test]
    fn goe_density_is_semicircle() {
        let p = EnsembleParams::gaussian(50, 25.0).unwrap();
        let batch = SpectrumBatch::generate(&p, 3, 1000).unwrap();
        let r = (50.0f64 / 25.0).sqrt();
        let h = empirical_density(&batch, BinSpec::Uniform { lo: -1.5 * r, hi: 1.5 * r, bins: 60 }).unwrap();
        assert!((h.integral() - 50.0).abs() < 1e-9);
        let peak = semicircle_density(0.0, 50, 25.0);
        // central 80% of the semicircle mass lies within |E| < 0.7 r
        let worst = h
            .centers()
            .iter()
            .zip(&h.values)
            .filter(|(c, _)| c.abs() < 0.7 * r)
            .map(|(c, v)| (v - semicircle_density(*c, 50, 25.0)).abs())
            .fold(0.0, f64::max);
        assert!(worst < 0.05 * peak, "{worst} vs peak {peak}");
    }

    #[test]
    fn heavy_tail_slope() {
        let p = EnsembleParams::from_lambda_auto(50, 0.5).unwrap();
        let ec = p.e_char().unwrap();
        let batch = SpectrumBatch::generate(&p, 4, 2000).unwrap();
        let folded: Vec<Vec<f64>> = batch.spectra.iter().map(|s| s.iter().map(|x| x.abs()).collect()).collect();
        let h = Histogram::level_density(&folded, BinSpec::Log { lo: 3.0 * ec, hi: 30.0 * ec, bins: 12 }).unwrap();
        let slope = loglog_slope(&h.geometric_centers(), &h.values).unwrap();
        assert!((slope + 2.0).abs() < 0.15, "{slope}");
    }

    #[test]
    fn density_converges_with_sample_count() {
        let p = EnsembleParams::from_lambda(10, 1.5, 1.0).unwrap();
        let spec = BinSpec::Uniform { lo: -6.0, hi: 6.0, bins: 24 };
        let big = SpectrumBatch::generate(&p, 5, 10_000).unwrap();
        let mut prev = f64::INFINITY;
        for &m in &[100usize, 1000, 10_000] {
            let sub = SpectrumBatch::from_spectra(&p, big.spectra[..m].to_vec()).unwrap();
            let h = empirical_density(&sub, spec).unwrap();
            let d = h
                .centers()
                .iter()
                .zip(&h.values)
                .map(|(c, v)| (v - level_density(*c, &p).unwrap()).abs())
                .fold(0.0, f64::max);
            assert!(d < prev, "m={m}: {d}");
            prev = d;
        }
    }

    #[test]
    fn gap_matches_analytic_within_four_se() {
        let p = EnsembleParams::from_lambda(20, 1.0, 10.0).unwrap();
        let batch = SpectrumBatch::generate(&p, 6, 4000).unwrap();
        let thetas: Vec<f64> = (0..=12).map(|i| 0.05 * i as f64).collect();
        let pts = empirical_gap(&batch, &thetas, SpacingScale::Analytic).unwrap();
        assert_eq!(pts[0].e, 1.0);
        for g in &pts {
            let exact = gap_probability(g.theta, &p).unwrap();
            let se = g.std_error.max(1.0 / batch.count as f64);
            assert!((g.e - exact).abs() <= 4.0 * se, "theta={}: {} vs {exact}", g.theta, g.e);
        }
        assert!(pts.windows(2).all(|w| w[1].e <= w[0].e && w[1].s >= w[0].s));
    }

    #[test]
    fn goe_spacings_follow_surmise() {
        let goe = EnsembleParams::gaussian(50, 0.5).unwrap();
        let sp = nn_spacings(&SpectrumBatch::generate(&goe, 7, 350).unwrap(), 0.6).unwrap();
        assert!(sp.len() >= 10_000);
        let d_goe = ks_distance(&sp, wigner_surmise_cdf);
        assert!(d_goe < 0.03, "{d_goe}");
        let rt = EnsembleParams::from_q(50, 0.0, 0.5).unwrap();
        let sp = nn_spacings(&SpectrumBatch::generate(&rt, 8, 350).unwrap(), 0.6).unwrap();
        let d_rt = ks_distance(&sp, wigner_surmise_cdf);
        assert!(d_rt < 0.03, "{d_rt}");
    }

    #[test]
    fn synthetic_spectra() {
        let p = EnsembleParams::gaussian(5, 1.0).unwrap();
        let ladder = SpectrumBatch::from_spectra(&p, vec![vec![4.0, 0.0, 1.0, 3.0, 2.0]; 3]).unwrap();
        assert_eq!(ladder.spectra[0], vec![0.0, 1.0, 2.0, 3.0, 4.0]);
        let sp = nn_spacings(&ladder, 1.0).unwrap();
        assert!(sp.iter().all(|&s| (s - 1.0).abs() < 1e-15));
        assert!(nn_spacings(&ladder, 0.0).is_err());
        let pts = empirical_gap(&ladder, &[0.0, 0.5], SpacingScale::Empirical).unwrap();
        assert_eq!((pts[0].e, pts[1].e), (1.0, 0.0));
        assert_eq!(pts[1].s, 1.0);
    }

    #[test]
    fn surmise_is_normalized() {
        assert!((wigner_surmise_cdf(50.0) - 1.0).abs() < 1e-15);
        assert_eq!(wigner_surmise_pdf(-1.0), 0.0);
        let h = 1e-6;
        let d = (wigner_surmise_cdf(1.0 + h) - wigner_surmise_cdf(1.0 - h)) / (2.0 * h);
        assert!((d - wigner_surmise_pdf(1.0)).abs() < 1e-8);
    }
}
