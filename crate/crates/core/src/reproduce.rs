//! Data behind the two reference figures: level densities at `N = 50`
//! across the tail parameter, and the gap probability at `N = 20`,
//! `lambda = 1` against simulation.

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{
    gap_asymptote, goe_gap_probability, integrated_density, level_density, semicircle_density, AnalyticCurve,
};
use crate::error::{Error, Result};
use crate::params::EnsembleParams;
use crate::specfun::quad::gauss_kronrod;
use crate::spectral::{empirical_density, empirical_gap, loglog_slope, BinSpec, GapPoint, SpacingScale, SpectrumBatch};

pub const FIG1_N: usize = 50;
pub const FIG1_LAMBDAS: [f64; 4] = [10.0, 1.0, 0.75, 0.5];
pub const FIG2_N: usize = 20;
pub const FIG2_LAMBDA: f64 = 1.0;

/// Smallest `theta` with `s(theta) >= target`, by bisection.
pub fn theta_for_count(params: &EnsembleParams, target: f64) -> Result<f64> {
    if !(target >= 0.0 && target < params.n() as f64) {
        return Err(Error::Invalid(format!("level count {target} outside [0, N)")));
    }
    let s = |t: f64| integrated_density(t, params).map(|r| r.value);
    let mut hi = params.e_char().unwrap_or(1.0).max(1e-6);
    while s(hi)? < target {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if s(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityOverlay {
    pub lambda: f64,
    pub centers: Vec<f64>,
    pub empirical: Vec<f64>,
    pub std_errors: Vec<f64>,
    /// Bin-averaged analytic density.
    pub analytic: Vec<f64>,
    /// Largest `|empirical - analytic| / std_error` over the bins.
    pub max_z: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Fig1Metrics {
    /// `sup |rho - rho_sc| / max rho_sc` at `lambda = 10` over the whole grid.
    pub sup_rel_lambda10: f64,
    /// The same restricted to the central 80% of the `lambda = 10` level mass.
    pub sup_rel_lambda10_central: f64,
    /// Log-log slope of the `lambda = 0.5` density on `[3 E_c, 30 E_c]`.
    pub tail_slope_lambda05: f64,
    pub overlays: Vec<DensityOverlay>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Fig1 {
    pub curves: Vec<AnalyticCurve>,
    /// Semicircle at `alpha (lambda-1)/lambda` for `lambda = 10`.
    pub reference: AnalyticCurve,
    pub metrics: Fig1Metrics,
}

pub fn fig1_params() -> Result<Vec<EnsembleParams>> {
    FIG1_LAMBDAS.iter().map(|&l| Ok(EnsembleParams::from_lambda_auto(FIG1_N, l)?)).collect()
}

/// Energy grid of the plotted curves.
pub fn fig1_grid() -> Vec<f64> {
    (0..=500).map(|i| -2.5 + 0.01 * i as f64).collect()
}

/// Monte Carlo histogram of `samples` draws against the bin-averaged
/// analytic density on the central 80% of the level mass.
pub fn density_overlay(params: &EnsembleParams, seed: u64, samples: usize, bins: usize) -> Result<DensityOverlay> {
    let e80 = theta_for_count(params, 0.8 * params.n() as f64)?;
    let spec = BinSpec::Uniform { lo: -e80, hi: e80, bins };
    let batch = SpectrumBatch::generate(params, seed, samples)?;
    let h = empirical_density(&batch, spec)?;
    let analytic = h
        .edges
        .windows(2)
        .map(|w| {
            let r = gauss_kronrod(|e| level_density(e, params).unwrap_or(f64::NAN), w[0], w[1], 1e-14, 1e-10)?;
            Ok(r.value / (w[1] - w[0]))
        })
        .collect::<Result<Vec<f64>>>()?;
    let max_z = h
        .values
        .iter()
        .zip(&analytic)
        .zip(&h.std_errors)
        .map(|((v, a), se)| {
            if *se > 0.0 {
                (v - a).abs() / se
            } else if v == a {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .fold(0.0, f64::max);
    Ok(DensityOverlay {
        lambda: params.lambda(),
        centers: h.centers(),
        empirical: h.values,
        std_errors: h.std_errors,
        analytic,
        max_z,
    })
}

/// Curves and metrics; with `overlay = Some((seed, samples))` each curve also
/// gets a Monte Carlo histogram.
pub fn fig1(overlay: Option<(u64, usize)>) -> Result<Fig1> {
    let params = fig1_params()?;
    let grid = fig1_grid();
    let curves = params.iter().map(|p| AnalyticCurve::level_density(p, &grid)).collect::<Result<Vec<_>>>()?;

    let p10 = &params[0];
    let reduced = p10.alpha() * (p10.lambda() - 1.0) / p10.lambda();
    let reference = AnalyticCurve::semicircle(&EnsembleParams::gaussian(FIG1_N, reduced)?, &grid)?;
    let peak = semicircle_density(0.0, FIG1_N, reduced);
    let e80 = theta_for_count(p10, 0.8 * FIG1_N as f64)?;
    let mut sup = 0f64;
    let mut sup_central = 0f64;
    // fine grid so the comparison does not depend on the plotting grid
    for i in 0..=4000 {
        let e = -2.5 + 5.0 * i as f64 / 4000.0;
        let d = (level_density(e, p10)? - semicircle_density(e, FIG1_N, reduced)).abs() / peak;
        sup = sup.max(d);
        if e.abs() <= e80 {
            sup_central = sup_central.max(d);
        }
    }

    let p05 = &params[3];
    let ec = p05.e_char().expect("levy branch has E_c");
    let tail_e: Vec<f64> = (0..=40).map(|i| 3.0 * ec * 10f64.powf(i as f64 / 40.0)).collect();
    let tail_rho = tail_e.iter().map(|&e| level_density(e, p05)).collect::<Result<Vec<_>>>()?;
    let tail_slope_lambda05 = loglog_slope(&tail_e, &tail_rho)?;

    let overlays = match overlay {
        Some((seed, samples)) => params
            .iter()
            .enumerate()
            .map(|(k, p)| density_overlay(p, seed.wrapping_add(k as u64), samples, 40))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };

    Ok(Fig1 {
        curves,
        reference,
        metrics: Fig1Metrics {
            sup_rel_lambda10: sup,
            sup_rel_lambda10_central: sup_central,
            tail_slope_lambda05,
            overlays,
        },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Fig2Row {
    pub theta: f64,
    pub s: f64,
    pub analytic: f64,
    pub asymptote: f64,
    pub goe: f64,
    pub simulated: Option<f64>,
    pub simulated_std_error: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Fig2Metrics {
    /// `max |E_hat - E|` over `s in [0, 4]`; `None` without simulation.
    pub max_abs_dev_s0_4: Option<f64>,
    /// Range of `s^2 E(s)` along the analytic curve for `s in [5, 10]`.
    pub s2e_min_5_10: f64,
    pub s2e_max_5_10: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Fig2 {
    pub params: EnsembleParams,
    pub rows: Vec<Fig2Row>,
    pub metrics: Fig2Metrics,
}

pub fn fig2_params() -> Result<EnsembleParams> {
    Ok(EnsembleParams::from_lambda_auto(FIG2_N, FIG2_LAMBDA)?)
}

/// Half-widths whose `s(theta)` runs uniformly over `[0, s_max]`.
pub fn theta_grid_for_counts(params: &EnsembleParams, s_max: f64, points: usize) -> Result<Vec<f64>> {
    (0..points)
        .into_par_iter()
        .map(|i| {
            let target = s_max * i as f64 / (points - 1) as f64;
            if target == 0.0 {
                Ok(0.0)
            } else {
                theta_for_count(params, target)
            }
        })
        .collect()
}

pub fn fig2(simulation: Option<(u64, usize)>) -> Result<Fig2> {
    let params = fig2_params()?;
    let thetas = theta_grid_for_counts(&params, 10.0, 201)?;
    let curve = AnalyticCurve::gap(&params, &thetas)?;
    let sim: Option<Vec<GapPoint>> = match simulation {
        Some((seed, samples)) => {
            let batch = SpectrumBatch::generate(&params, seed, samples)?;
            Some(empirical_gap(&batch, &thetas, SpacingScale::Analytic)?)
        }
        None => None,
    };
    let rows: Vec<Fig2Row> = (0..thetas.len())
        .map(|i| {
            let s = curve.abscissae[i];
            Fig2Row {
                theta: thetas[i],
                s,
                analytic: curve.values[i],
                asymptote: if s > 0.0 { gap_asymptote(s) } else { f64::INFINITY },
                goe: goe_gap_probability(s),
                simulated: sim.as_ref().map(|g| g[i].e),
                simulated_std_error: sim.as_ref().map(|g| g[i].std_error),
            }
        })
        .collect();
    let max_abs_dev_s0_4 = sim.as_ref().map(|_| {
        rows.iter().filter(|r| r.s <= 4.0 + 1e-9).map(|r| (r.simulated.unwrap() - r.analytic).abs()).fold(0.0, f64::max)
    });
    let s2e: Vec<f64> =
        rows.iter().filter(|r| r.s >= 5.0 - 1e-9 && r.s <= 10.0 + 1e-9).map(|r| r.s * r.s * r.analytic).collect();
    let metrics = Fig2Metrics {
        max_abs_dev_s0_4,
        s2e_min_5_10: s2e.iter().copied().fold(f64::INFINITY, f64::min),
        s2e_max_5_10: s2e.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    };
    Ok(Fig2 { params, rows, metrics })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_inverts_counting() {
        let p = fig2_params().unwrap();
        for &target in &[0.5, 4.0, 10.0] {
            let t = theta_for_count(&p, target).unwrap();
            assert!((integrated_density(t, &p).unwrap().value - target).abs() < 1e-9);
        }
        assert!(theta_for_count(&p, 20.0).is_err());
    }

    #[test]
    fn fig1_layout() {
        let f = fig1(None).unwrap();
        assert_eq!(f.curves.len(), 4);
        assert_eq!(f.reference.values.len(), f.curves[0].values.len());
        assert!(f.metrics.sup_rel_lambda10_central <= f.metrics.sup_rel_lambda10);
    }

    #[test]
    fn fig2_layout() {
        let f = fig2(None).unwrap();
        assert_eq!((f.rows[0].s, f.rows[0].analytic), (0.0, 1.0));
        let last = f.rows.last().unwrap();
        assert!((last.s - 10.0).abs() < 1e-8);
        for r in f.rows.iter().skip(1) {
            assert_eq!(r.asymptote, 1.0 / (2.0 * r.s * r.s));
        }
        assert!(f.metrics.max_abs_dev_s0_4.is_none());
    }
}
