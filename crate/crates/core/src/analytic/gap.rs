//! Probability that `(-theta, theta)` holds no level, built from the GOE
//! surmise `E_GOE(y) = erfc(sqrt(pi) y/2)` averaged over the Gamma mixture.

use std::f64::consts::PI;

use super::density::{goe_counting, mixture_of_counting, ABS_TOL, REL_TOL};
use crate::error::{Error, Result};
use crate::params::{EnsembleParams, Regime};
use crate::specfun::quad::{integrate_to_infinity, sum_results, tanh_sinh_with_distances, QuadratureResult};
use crate::specfun::{erfc, ln_gamma};

/// Wigner-surmise gap probability of the GOE in unfolded units.
pub fn goe_gap_probability(s: f64) -> f64 {
    erfc(0.5 * PI.sqrt() * s)
}

/// Large-`s` power law `1/(2 s^2)` of the `lambda = 1` ensemble.
pub fn gap_asymptote(s: f64) -> f64 {
    0.5 / (s * s)
}

fn check_theta(theta: f64) -> Result<()> {
    if theta >= 0.0 && theta.is_finite() {
        Ok(())
    } else {
        Err(Error::Invalid(format!("theta must be finite and >= 0, got {theta}")))
    }
}

/// `E(theta) = (1/Gamma(lambda)) int e^{-xi} xi^{lambda-1} E_GOE[y(sqrt(2 alpha xi/lambda) theta)] dxi`,
/// with a quadrature error estimate.
pub fn gap_probability_estimate(theta: f64, params: &EnsembleParams) -> Result<QuadratureResult> {
    check_theta(theta)?;
    let mut r = mixture_of_counting(theta, params, goe_gap_probability)?;
    r.value = r.value.clamp(0.0, 1.0);
    Ok(r)
}

/// Gap probability `E(theta)`; `E(0) = 1`.
pub fn gap_probability(theta: f64, params: &EnsembleParams) -> Result<f64> {
    Ok(gap_probability_estimate(theta, params)?.value)
}

/// The same quantity after substituting `x = sqrt(2 alpha xi/lambda) theta`:
///
/// `E(theta) = (2/Gamma(lambda)) (lambda/(2 alpha))^lambda theta^{-2 lambda}
///   int_0^inf exp[-(lambda/(2 alpha)) (x/theta)^2] x^{2 lambda - 1} E_GOE(y(x)) dx`.
pub fn gap_probability_substituted(theta: f64, params: &EnsembleParams) -> Result<QuadratureResult> {
    check_theta(theta)?;
    if params.regime() != Regime::LevyBranch {
        return Err(Error::WrongRegime { op: "gap_probability_substituted", regime: params.regime().name() });
    }
    if theta == 0.0 {
        return Ok(QuadratureResult { value: 1.0, abs_error_estimate: 0.0, evaluations: 0 });
    }
    let n = params.n();
    let lambda = params.lambda();
    let c = lambda / (2.0 * params.alpha());
    let ln_pre = 2f64.ln() - ln_gamma(lambda) + lambda * c.ln() - 2.0 * lambda * theta.ln();
    let weight = move |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        (ln_pre - c * (x / theta).powi(2) + (2.0 * lambda - 1.0) * x.ln()).exp()
    };
    let edge = (2.0 * n as f64).sqrt();
    let inside = tanh_sinh_with_distances(
        |x, _, _| weight(x) * goe_gap_probability(goe_counting(x, n)),
        0.0,
        edge,
        ABS_TOL,
        REL_TOL,
    )?;
    let beyond = goe_gap_probability(n as f64);
    let mut parts = vec![inside];
    if beyond > 0.0 {
        // the Gaussian factor lives on the scale theta/sqrt(c)
        let s = theta / c.sqrt();
        let tail = integrate_to_infinity(|u| s * weight(edge + s * u), 0.0, ABS_TOL, REL_TOL)?;
        parts.push(tail.scaled(beyond));
    }
    Ok(sum_results(parts))
}
