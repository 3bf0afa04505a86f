//! Invariant suites behind `qrmt verify`, reported as TAP.

use std::f64::consts::{E, PI};
use std::fmt::Write as _;

use clap::ValueEnum;
use qrmt::analytic::{
    element_cdf, element_char_fn, element_correlation, element_pdf, gap_probability, gap_probability_substituted,
    integrated_density, level_density, level_density_mixture, level_density_quadrature, semicircle_density,
    ElementKind,
};
use qrmt::sampler::{map_batch, sample, sample_batch, sample_gamma, RngStream};
use qrmt::specfun::quad::{gauss_kronrod, integrate_to_infinity};
use qrmt::specfun::{bessel_k, erf, gamma, kummer_m, kummer_m_via, levy_density, ln_gamma, reg_inc_beta, KummerRoute};
use qrmt::spectral::{
    eigenvalues, empirical_gap, ks_distance, nn_spacings, symmetric_eigen, tail_index, wigner_surmise_cdf, BinSpec,
    Histogram, SpacingScale, SpectrumBatch,
};
use qrmt::EnsembleParams;

use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Specfun,
    Samplers,
    Analytic,
    Spectral,
    All,
}

/// One check passes when `deviation <= tolerance` (and is not NaN).
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(suite: &'static str, name: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        Check { suite, name: name.into(), deviation, tolerance }
    }

    pub fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

fn z(got: f64, want: f64, se: f64) -> f64 {
    (got - want).abs() / se
}

/// Monte Carlo checks use at most 4 standard errors, KS checks the
/// 0.1% critical value `1.95/sqrt(n)`.
const Z_LIMIT: f64 = 4.0;

fn ks_limit(n: usize) -> f64 {
    1.95 / (n as f64).sqrt()
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn specfun_suite() -> CliResult<Vec<Check>> {
    const S: &str = "specfun";
    let mut out = vec![
        Check::new(S, "K_{1/2}(1) = sqrt(pi/2)/e", rel(bessel_k(0.5, 1.0)?, (PI / 2.0).sqrt() / E), 1e-12),
        Check::new(S, "K_1(1)", rel(bessel_k(1.0, 1.0)?, 0.601_907_230_197_234_6), 1e-12),
        Check::new(
            S,
            "K_{1/2}(30) = sqrt(pi/60) e^-30",
            rel(bessel_k(0.5, 30.0)?, (PI / 60.0).sqrt() * (-30f64).exp()),
            1e-12,
        ),
        Check::new(S, "M(1, 2, -1) = 1 - 1/e", rel(kummer_m(1.0, 2.0, -1.0)?, 1.0 - 1.0 / E), 1e-12),
        Check::new(
            S,
            "M(0.6, 2.1, -3): direct series vs Kummer-transformed series",
            rel(
                kummer_m_via(0.6, 2.1, -3.0, KummerRoute::Series)?,
                kummer_m_via(0.6, 2.1, -3.0, KummerRoute::KummerSeries)?,
            ),
            1e-10,
        ),
        Check::new(S, "erf(1)", rel(erf(1.0), 0.842_700_792_949_714_9), 1e-14),
        Check::new(S, "Gamma(5) = 24", rel(gamma(5.0), 24.0), 1e-13),
        Check::new(S, "ln Gamma(1/2) = ln sqrt(pi)", (ln_gamma(0.5) - 0.5 * PI.ln()).abs(), 1e-14),
        Check::new(S, "I_0.4(2, 3) = 0.5248", rel(reg_inc_beta(2.0, 3.0, 0.4)?, 0.5248), 1e-12),
        Check::new(S, "L(0; 1.5, 1) = Gamma(5/3)/pi", rel(levy_density(0.0, 1.5, 1.0)?, gamma(5.0 / 3.0) / PI), 1e-10),
        Check::new(S, "L(2; 1, 1) = Cauchy", rel(levy_density(2.0, 1.0, 1.0)?, 1.0 / (5.0 * PI)), 1e-10),
        Check::new(
            S,
            "L(1; 2, 1) = Gaussian of variance 2",
            rel(levy_density(1.0, 2.0, 1.0)?, (-0.25f64).exp() / (4.0 * PI).sqrt()),
            1e-10,
        ),
    ];
    let r = gauss_kronrod(|x| x.exp(), 0.0, 1.0, 1e-15, 1e-14)?;
    out.push(Check::new(S, "int_0^1 e^x dx = e - 1", rel(r.value, E - 1.0), 1e-14));
    let r = integrate_to_infinity(|x| 1.0 / (1.0 + x * x), 0.0, 1e-15, 1e-13)?;
    out.push(Check::new(S, "int_0^inf dx/(1+x^2) = pi/2", rel(r.value, PI / 2.0), 1e-12));
    Ok(out)
}

pub fn sampler_suite(seed: u64) -> CliResult<Vec<Check>> {
    const S: &str = "samplers";
    let mut out = Vec::new();

    let goe = EnsembleParams::gaussian(4, 1.0)?;
    let draws = map_batch(&goe, seed, 20_000, |s| Ok((s.h.get(0, 0), s.h.get(0, 1))))?;
    let diag: Vec<f64> = draws.iter().map(|d| d.0 * d.0).collect();
    let off: Vec<f64> = draws.iter().map(|d| d.1 * d.1).collect();
    let (m, se) = mean_and_se(&diag);
    out.push(Check::new(S, "GOE diagonal variance 1/(2 alpha), |z|", z(m, 0.5, se), Z_LIMIT));
    let (m, se) = mean_and_se(&off);
    out.push(Check::new(S, "GOE off-diagonal variance 1/(4 alpha), |z|", z(m, 0.25, se), Z_LIMIT));

    let levy = EnsembleParams::from_lambda(3, 5.0, 0.5)?;
    let sq: Vec<f64> = map_batch(&levy, seed ^ 1, 20_000, |s| Ok(s.h.get(1, 1).powi(2)))?;
    let (m, se) = mean_and_se(&sq);
    out.push(Check::new(S, "lambda=5 diagonal <h^2> = lambda/(2 alpha (lambda-1)), |z|", z(m, 1.25, se), Z_LIMIT));

    let cauchy = EnsembleParams::from_lambda(4, 0.5, 0.5)?;
    let xs: Vec<f64> = map_batch(&cauchy, seed ^ 2, 20_000, |s| Ok(s.h.get(0, 2)))?;
    let d = ks_distance(&xs, |x| element_cdf(x, &cauchy, ElementKind::OffDiagonal).unwrap_or(f64::NAN));
    out.push(Check::new(S, "lambda=1/2 off-diagonal KS vs element CDF", d, ks_limit(xs.len())));

    let rt = EnsembleParams::from_q(3, 0.0, 1.0)?;
    let bound = rt.trace_bound().expect("q < 1 has a trace bound");
    let tr: Vec<f64> = map_batch(&rt, seed ^ 3, 20_000, |s| Ok(s.h.trace_sq()))?;
    let violations = tr.iter().filter(|&&t| !(t < bound)).count();
    out.push(Check::new(S, "q=0 draws satisfy tr H^2 < -lambda/alpha, violations", violations as f64, 0.0));

    let bt = EnsembleParams::bounded_trace(3, 2.0)?;
    let half_f = bt.f() as f64 / 2.0;
    let radius_sq = half_f / bt.alpha();
    let u: Vec<f64> = map_batch(&bt, seed ^ 4, 20_000, |s| Ok(s.h.trace_sq() / radius_sq))?;
    let d = ks_distance(&u, |x| x.clamp(0.0, 1.0).powf(half_f));
    out.push(Check::new(S, "bounded trace radial CDF u^{f/2}, KS", d, ks_limit(u.len())));

    let g: Vec<f64> = (0..20_000u64)
        .map(|k| sample_gamma(2.5, &mut RngStream::new(seed ^ 5, k).rng()))
        .collect::<qrmt::Result<_>>()?;
    let (m, se) = mean_and_se(&g);
    out.push(Check::new(S, "Gamma(2.5) mean, |z|", z(m, 2.5, se), Z_LIMIT));

    let a = sample(&levy, RngStream::new(seed, 11))?;
    let b = sample(&levy, RngStream::new(seed, 11))?;
    let same = a.h.as_slice().iter().zip(b.h.as_slice()).filter(|(x, y)| x.to_bits() != y.to_bits()).count();
    out.push(Check::new(S, "same stream reproduces bit-identical matrices, differing entries", same as f64, 0.0));

    let run = |threads: usize| -> CliResult<Vec<u64>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| crate::error::CliError::Numeric(e.to_string()))?;
        let batch = pool.install(|| sample_batch(&levy, seed, 64))?;
        Ok(batch.iter().flat_map(|s| s.h.as_slice().iter().map(|v| v.to_bits())).collect())
    };
    let (one, three) = (run(1)?, run(3)?);
    let differ = one.iter().zip(&three).filter(|(x, y)| x != y).count();
    out.push(Check::new(S, "batch independent of thread count, differing entries", differ as f64, 0.0));
    Ok(out)
}

pub fn analytic_suite() -> CliResult<Vec<Check>> {
    const S: &str = "analytic";
    let mut out = Vec::new();

    let cauchy = EnsembleParams::from_lambda(1, 0.5, 0.5)?;
    let mass =
        2.0 * integrate_to_infinity(|x| element_pdf(x, &cauchy, ElementKind::Diagonal), 0.0, 1e-15, 1e-12)?.value;
    out.push(Check::new(S, "element pdf integrates to 1 (lambda=1/2)", (mass - 1.0).abs(), 1e-8));
    let cf = [0.1, 1.0, 5.0]
        .iter()
        .map(|&k| Ok((element_char_fn(k, &cauchy, ElementKind::Diagonal)? - (-k).exp()).abs()))
        .collect::<CliResult<Vec<f64>>>()?;
    out.push(Check::new(S, "lambda=1/2 characteristic function = e^{-|k|}", cf.into_iter().fold(0.0, f64::max), 1e-9));

    let t3 = EnsembleParams::from_lambda(2, 3.0, 0.5)?;
    let c = element_correlation(&t3, ElementKind::Diagonal)?;
    out.push(Check::new(S, "correlation at lambda=3, alpha=1/2 equals -2.25", rel(c, -2.25), 1e-12));

    let p = EnsembleParams::from_lambda(20, 1.5, 10.0)?;
    let total = 2.0 * integrate_to_infinity(|e| level_density(e, &p).unwrap_or(f64::NAN), 0.0, 1e-14, 1e-11)?.value;
    out.push(Check::new(S, "level density integrates to N=20", (total - 20.0).abs(), 1e-6));
    let mut worst = 0f64;
    for &e in &[0.0, 0.3, 1.0, 2.0, 5.0] {
        let closed = level_density(e, &p)?;
        worst = worst.max(rel(level_density_quadrature(e, &p)?.value, closed));
        worst = worst.max(rel(level_density_mixture(e, &p)?.value, closed));
    }
    out.push(Check::new(S, "level density closed form vs two quadratures, rel", worst, 1e-8));
    let half = integrated_density(1.0, &p)?.value;
    let direct = gauss_kronrod(|e| level_density(e, &p).unwrap_or(f64::NAN), -1.0, 1.0, 1e-14, 1e-12)?.value;
    out.push(Check::new(S, "integrated density vs direct integral, rel", rel(half, direct), 1e-8));

    let g = EnsembleParams::gaussian(20, 10.0)?;
    let sc = 2.0 * gauss_kronrod(|e| semicircle_density(e, 20, 10.0), 0.0, 2.0, 1e-15, 1e-13)?.value;
    out.push(Check::new(S, "semicircle integrates to N=20", (sc - 20.0).abs(), 1e-9));
    out.push(Check::new(
        S,
        "GOE level density is the semicircle",
        rel(level_density(0.4, &g)?, semicircle_density(0.4, 20, 10.0)),
        0.0,
    ));

    let f2 = EnsembleParams::from_lambda(20, 1.0, 10.0)?;
    out.push(Check::new(S, "gap probability E(0) = 1", (gap_probability(0.0, &f2)? - 1.0).abs(), 0.0));
    let l05 = EnsembleParams::from_lambda(20, 0.5, 10.0)?;
    let mut worst = 0f64;
    for &t in &[1.0, 5.0, 20.0] {
        worst = worst.max((gap_probability(t, &l05)? - gap_probability_substituted(t, &l05)?.value).abs());
    }
    out.push(Check::new(S, "gap probability mixture vs substituted form (lambda=1/2)", worst, 1e-6));
    Ok(out)
}

pub fn spectral_suite(seed: u64) -> CliResult<Vec<Check>> {
    const S: &str = "spectral";
    let mut out = Vec::new();

    let p = EnsembleParams::from_lambda(30, 2.0, 1.0)?;
    let h = sample(&p, RngStream::new(seed, 0))?.h;
    let n = h.n();
    let eig = symmetric_eigen(&h);
    let v = eig.vectors.as_ref().expect("vectors requested");
    let norm = h.trace_sq().sqrt();
    let (mut resid, mut ortho) = (0f64, 0f64);
    for k in 0..n {
        for i in 0..n {
            let hv: f64 = (0..n).map(|j| h.get(i, j) * v[j * n + k]).sum();
            resid = resid.max((hv - eig.values[k] * v[i * n + k]).abs());
        }
        for l in 0..n {
            let dot: f64 = (0..n).map(|i| v[i * n + k] * v[i * n + l]).sum();
            ortho = ortho.max((dot - if k == l { 1.0 } else { 0.0 }).abs());
        }
    }
    out.push(Check::new(S, "eigen residual |Hv - ev|/||H||", resid / norm, 1e-12));
    out.push(Check::new(S, "eigenvector orthonormality", ortho, 1e-12));
    let vals = eigenvalues(&h);
    out.push(Check::new(S, "sum of eigenvalues = tr H", (vals.iter().sum::<f64>() - h.trace()).abs() / norm, 1e-12));
    out.push(Check::new(
        S,
        "sum of squared eigenvalues = tr H^2",
        rel(vals.iter().map(|x| x * x).sum::<f64>(), h.trace_sq()),
        1e-12,
    ));

    let goe = EnsembleParams::gaussian(50, 0.5)?;
    let batch = SpectrumBatch::generate(&goe, seed ^ 7, 200)?;
    let hist = Histogram::level_density(&batch.spectra, BinSpec::Uniform { lo: -20.0, hi: 20.0, bins: 40 })?;
    out.push(Check::new(S, "level histogram integrates to N=50", (hist.integral() - 50.0).abs(), 1e-10));
    let sp = nn_spacings(&batch, 0.6)?;
    let d = ks_distance(&sp, wigner_surmise_cdf);
    out.push(Check::new(S, "GOE spacings vs Wigner surmise, KS", d, 0.03));
    let gap = empirical_gap(&batch, &[0.0], SpacingScale::Empirical)?;
    out.push(Check::new(S, "empirical gap E(0) = 1", (gap[0].e - 1.0).abs(), 0.0));

    let pareto: Vec<f64> = (0..20_000u64)
        .map(|k| Ok((sample_gamma(1.0, &mut RngStream::new(seed ^ 9, k).rng())? / 1.5).exp()))
        .collect::<qrmt::Result<_>>()?;
    let t = tail_index(&pareto, None)?;
    out.push(Check::new(S, "Hill index of Pareto(1.5), |z|", z(t.estimate, 1.5, t.std_error), Z_LIMIT));
    Ok(out)
}

pub fn run_suite(suite: Suite, seed: u64) -> CliResult<Vec<Check>> {
    Ok(match suite {
        Suite::Specfun => specfun_suite()?,
        Suite::Samplers => sampler_suite(seed)?,
        Suite::Analytic => analytic_suite()?,
        Suite::Spectral => spectral_suite(seed)?,
        Suite::All => {
            let mut all = specfun_suite()?;
            all.extend(sampler_suite(seed)?);
            all.extend(analytic_suite()?);
            all.extend(spectral_suite(seed)?);
            all
        }
    })
}

/// TAP report. `tolerance` replaces every check's own tolerance.
pub fn tap_report(checks: &mut [Check], tolerance: Option<f64>) -> (String, usize) {
    if let Some(t) = tolerance {
        checks.iter_mut().for_each(|c| c.tolerance = t);
    }
    let mut out = String::from("TAP version 13\n");
    let _ = writeln!(out, "1..{}", checks.len());
    let mut failed = 0;
    for (i, c) in checks.iter().enumerate() {
        let ok = c.passed();
        failed += usize::from(!ok);
        let _ = writeln!(
            out,
            "{} {} - {}: {} # deviation {:.3e}, tolerance {:.1e}",
            if ok { "ok" } else { "not ok" },
            i + 1,
            c.suite,
            c.name,
            c.deviation,
            c.tolerance
        );
    }
    let _ = writeln!(out, "# {} passed, {} failed", checks.len() - failed, failed);
    (out, failed)
}
