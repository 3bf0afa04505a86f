//! Single-element laws: density, distribution function, characteristic
//! function, limiting forms and the pair correlation.
//!
//! A diagonal element has kernel `(1 + (alpha/lambda) x^2)^{-lambda-1/2}`.
//! Off-diagonal elements carry half the variance, so they follow the same
//! law with `alpha` replaced by `2 alpha`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, ParamError, Result};
use crate::params::{EnsembleParams, Regime};
use crate::specfun::{erf, levy_density, ln_bessel_k, ln_gamma, reg_inc_beta};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ElementKind {
    Diagonal,
    OffDiagonal,
}

impl ElementKind {
    /// Factor multiplying `alpha` in the element law.
    pub fn alpha_factor(self) -> f64 {
        match self {
            ElementKind::Diagonal => 1.0,
            ElementKind::OffDiagonal => 2.0,
        }
    }
}

/// Density of one matrix element.
///
/// * Levy branch: Student t with `2 lambda` degrees of freedom,
///   `sqrt(a/(pi lambda)) Gamma(lambda+1/2)/Gamma(lambda) (1 + (a/lambda) x^2)^{-lambda-1/2}`.
/// * Restricted trace: same kernel on `|x| < sqrt(|lambda|/a)`, constant
///   `sqrt(a/(pi |lambda|)) Gamma(1-lambda)/Gamma(1/2-lambda)`.
/// * Gaussian: `sqrt(a/pi) exp(-a x^2)`.
///
/// Here `a = alpha` for diagonal and `2 alpha` for off-diagonal elements.
pub fn element_pdf(x: f64, params: &EnsembleParams, kind: ElementKind) -> f64 {
    let a = params.alpha() * kind.alpha_factor();
    let lambda = params.lambda();
    match params.regime() {
        Regime::Gaussian => (a / PI).sqrt() * (-a * x * x).exp(),
        Regime::LevyBranch => {
            let ln_c = 0.5 * (a / (PI * lambda)).ln() + ln_gamma(lambda + 0.5) - ln_gamma(lambda);
            (ln_c - (lambda + 0.5) * (a * x * x / lambda).ln_1p()).exp()
        }
        Regime::RestrictedTrace => {
            let m = -lambda - 0.5;
            let t = a * x * x / -lambda;
            if t >= 1.0 {
                return 0.0;
            }
            let ln_c = 0.5 * (a / (PI * -lambda)).ln() + ln_gamma(1.0 - lambda) - ln_gamma(0.5 - lambda);
            (ln_c + m * (-t).ln_1p()).exp()
        }
    }
}

/// Distribution function of one matrix element, from the regularized
/// incomplete beta function (or `erf` in the Gaussian regime).
pub fn element_cdf(x: f64, params: &EnsembleParams, kind: ElementKind) -> Result<f64> {
    let a = params.alpha() * kind.alpha_factor();
    let lambda = params.lambda();
    if x == 0.0 {
        return Ok(0.5);
    }
    let upper_half = match params.regime() {
        Regime::Gaussian => 0.5 * erf(a.sqrt() * x.abs()),
        Regime::LevyBranch => {
            // P(|X| > |x|) = I_{1/(1+t)}(lambda, 1/2) with t = a x^2 / lambda
            let t = a * x * x / lambda;
            0.5 * (1.0 - reg_inc_beta(lambda, 0.5, 1.0 / (1.0 + t))?)
        }
        Regime::RestrictedTrace => {
            let t = (a * x * x / -lambda).min(1.0);
            0.5 * reg_inc_beta(0.5, 0.5 - lambda, t)?
        }
    };
    Ok(if x > 0.0 { 0.5 + upper_half } else { 0.5 - upper_half })
}

fn require_levy(params: &EnsembleParams, op: &'static str) -> Result<()> {
    if params.regime() == Regime::LevyBranch {
        Ok(())
    } else {
        Err(Error::WrongRegime { op, regime: params.regime().name() })
    }
}

/// `c = sqrt(lambda/a)`, the scale in the characteristic function.
fn char_scale(params: &EnsembleParams, kind: ElementKind) -> f64 {
    (params.lambda() / (params.alpha() * kind.alpha_factor())).sqrt()
}

/// Characteristic function of one element on the Levy branch,
/// `F(k) = 2^{1-lambda}/Gamma(lambda) (|k| c)^lambda K_lambda(|k| c)`,
/// normalized so that `F(0) = 1`.
pub fn element_char_fn(k: f64, params: &EnsembleParams, kind: ElementKind) -> Result<f64> {
    require_levy(params, "element_char_fn")?;
    let lambda = params.lambda();
    let z = k.abs() * char_scale(params, kind);
    if z == 0.0 {
        return Ok(1.0);
    }
    let ln_f = (1.0 - lambda) * 2f64.ln() - ln_gamma(lambda) + lambda * z.ln() + ln_bessel_k(lambda, z)?;
    Ok(ln_f.exp())
}

/// Leading small-`k` form of [`element_char_fn`]:
/// `exp(-Lambda |k c|^2)` for `lambda > 1` and
/// `exp(-Lambda |k c/2|^{2 lambda})` for `0 < lambda < 1`.
pub fn element_char_fn_small_k(k: f64, params: &EnsembleParams, kind: ElementKind) -> Result<f64> {
    require_levy(params, "element_char_fn_small_k")?;
    let lambda = params.lambda();
    let big = params.big_lambda().ok_or(ParamError::MarginalCase)?;
    let kc = k.abs() * char_scale(params, kind);
    Ok(if lambda > 1.0 { (-big * kc * kc).exp() } else { (-big * (0.5 * kc).powf(2.0 * lambda)).exp() })
}

/// Large-`N` limiting law of a diagonal element on the Levy branch:
/// Gaussian `sqrt((lambda-1) alpha/(pi lambda)) exp(-(lambda-1)(alpha/lambda) x^2)`
/// for `lambda > 1`, and `2 s L(2 s x; 2 lambda, Lambda)` with `s = sqrt(alpha/lambda)`
/// for `0 < lambda < 1`.
pub fn limiting_element_pdf(x: f64, params: &EnsembleParams) -> Result<f64> {
    require_levy(params, "limiting_element_pdf")?;
    let lambda = params.lambda();
    let alpha = params.alpha();
    let big = params.big_lambda().ok_or(ParamError::MarginalCase)?;
    if lambda > 1.0 {
        let a = (lambda - 1.0) * alpha / lambda;
        Ok((a / PI).sqrt() * (-a * x * x).exp())
    } else {
        let s = (alpha / lambda).sqrt();
        Ok(2.0 * s * levy_density(2.0 * s * x, 2.0 * lambda, big)?)
    }
}

/// `C = <h^2>^2 - <h_1^2 h_2^2>` for two distinct elements of the same kind.
///
/// Diagonal pairs give `lambda^2 / (4 alpha^2 (2-lambda)(1-lambda)^2)`;
/// off-diagonal pairs the same with `16 alpha^2`. On the Levy branch the
/// fourth moments exist only for `lambda > 2`. The formula also holds on the
/// restricted-trace branch, where every moment is finite. In the Gaussian
/// regime `C = 0`.
pub fn element_correlation(params: &EnsembleParams, kind: ElementKind) -> Result<f64> {
    let lambda = params.lambda();
    let a = params.alpha() * kind.alpha_factor();
    match params.regime() {
        Regime::Gaussian => Ok(0.0),
        Regime::LevyBranch if lambda <= 2.0 => Err(Error::MomentDivergence { lambda }),
        _ => Ok(lambda * lambda / (4.0 * a * a * (2.0 - lambda) * (1.0 - lambda).powi(2))),
    }
}
