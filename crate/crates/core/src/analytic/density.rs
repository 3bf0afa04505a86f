//! Level density and its integral.
//!
//! On the Levy branch every spectral law is a Gamma mixture of the GOE law
//! at `alpha xi/lambda`. The closed form goes through Kummer's function; the
//! two `xi`-integral forms are kept as independent cross-checks.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::params::{EnsembleParams, Regime};
use crate::specfun::quad::{sum_results, tanh_sinh_with_distances, QuadratureResult};
use crate::specfun::{kummer_m_power_scaled, ln_gamma};

pub(crate) const ABS_TOL: f64 = 1e-300;
pub(crate) const REL_TOL: f64 = 1e-12;

/// Upper cut of the `xi` integrals; the Gamma(lambda) mass beyond it is
/// below `1e-12`.
pub fn xi_max(lambda: f64) -> f64 {
    50f64.max(lambda + 20.0 * lambda.sqrt())
}

/// `e^{-xi} xi^{lambda-1} / Gamma(lambda)`.
#[inline]
pub(crate) fn gamma_weight(xi: f64, lambda: f64, ln_gamma_lambda: f64) -> f64 {
    if xi <= 0.0 {
        return 0.0;
    }
    (-xi + (lambda - 1.0) * xi.ln() - ln_gamma_lambda).exp()
}

/// Wigner semicircle `(2 alpha/pi) sqrt(N/alpha - E^2)` on `|E| < sqrt(N/alpha)`.
pub fn semicircle_density(e: f64, n: usize, alpha: f64) -> f64 {
    let r2 = n as f64 / alpha;
    let d = r2 - e * e;
    if d <= 0.0 {
        0.0
    } else {
        2.0 * alpha / PI * d.sqrt()
    }
}

/// Number of GOE levels in `(-x, x)` in the units where `alpha = 1/2`:
/// `y(x) = (1/pi) [x sqrt(2N - x^2) + 2N arcsin(x/sqrt(2N))]`,
/// odd in `x` and equal to `+-N` beyond the edge.
pub fn goe_counting(x: f64, n: usize) -> f64 {
    let nf = n as f64;
    let edge = (2.0 * nf).sqrt();
    let ax = x.abs();
    if ax >= edge {
        return nf.copysign(x);
    }
    // x = edge cos(u/2): y = N - (N/pi)(u - sin u), well conditioned up to the edge
    let u = 2.0 * (((edge - ax) * (edge + ax)).sqrt()).atan2(ax);
    let u_minus_sin = if u < 0.1 {
        let u2 = u * u;
        u * u2 / 6.0 * (1.0 - u2 / 20.0 * (1.0 - u2 / 42.0 * (1.0 - u2 / 72.0)))
    } else {
        u - u.sin()
    };
    (nf - nf / PI * u_minus_sin).copysign(x)
}

fn require_levy(params: &EnsembleParams, op: &'static str) -> Result<()> {
    if params.regime() == Regime::LevyBranch {
        Ok(())
    } else {
        Err(Error::WrongRegime { op, regime: params.regime().name() })
    }
}

/// Level density normalized to `N`.
///
/// On the Levy branch, with `a = lambda+1/2`, `b = lambda+2`,
/// `X = N lambda/(alpha E^2)`:
///
/// `rho(E) = sqrt(N alpha/lambda)/sqrt(pi) Gamma(a)/(Gamma(lambda) Gamma(b)) X^a M(a, b, -X)`.
///
/// At `E = 0` this is `(2/pi) sqrt(N alpha/lambda) Gamma(lambda+1/2)/Gamma(lambda)`.
/// In the Gaussian regime the semicircle is returned.
pub fn level_density(e: f64, params: &EnsembleParams) -> Result<f64> {
    let n = params.n() as f64;
    let alpha = params.alpha();
    if params.regime() == Regime::Gaussian {
        return Ok(semicircle_density(e, params.n(), alpha));
    }
    require_levy(params, "level_density")?;
    let lambda = params.lambda();
    let a = lambda + 0.5;
    let b = lambda + 2.0;
    let x = if e == 0.0 { f64::INFINITY } else { n * lambda / (alpha * e * e) };
    let ln_pre = 0.5 * (n * alpha / (lambda * PI)).ln() + ln_gamma(a) - ln_gamma(lambda) - ln_gamma(b);
    Ok(ln_pre.exp() * kummer_m_power_scaled(a, b, x)?)
}

/// Level density as the direct `xi` integral
/// `(1/Gamma(lambda)) sqrt(2 alpha/lambda) (1/pi) int_0^X e^{-xi} xi^{lambda-1/2} sqrt(2N - 2 alpha xi E^2/lambda) dxi`.
pub fn level_density_quadrature(e: f64, params: &EnsembleParams) -> Result<QuadratureResult> {
    require_levy(params, "level_density_quadrature")?;
    let n = params.n() as f64;
    let alpha = params.alpha();
    let lambda = params.lambda();
    let lg = ln_gamma(lambda);
    let k = 2.0 * alpha * e * e / lambda;
    let top = if k == 0.0 { xi_max(lambda) } else { (2.0 * n / k).min(xi_max(lambda)) };
    let pre = (2.0 * alpha / lambda).sqrt() / PI;
    let edge_inside = k > 0.0 && 2.0 * n / k <= xi_max(lambda);
    let r = tanh_sinh_with_distances(
        |xi, _, to_top| {
            // 2N - k xi, exact near the semicircle edge
            let rad = if edge_inside { k * to_top } else { 2.0 * n - k * xi };
            if rad <= 0.0 {
                return 0.0;
            }
            gamma_weight(xi, lambda, lg) * xi.sqrt() * rad.sqrt()
        },
        0.0,
        top,
        ABS_TOL,
        REL_TOL,
    )?;
    Ok(r.scaled(pre))
}

/// Level density as the Gamma mixture of semicircles
/// `(1/Gamma(lambda)) int e^{-xi} xi^{lambda-1} rho_sc(E; alpha xi/lambda) dxi`.
pub fn level_density_mixture(e: f64, params: &EnsembleParams) -> Result<QuadratureResult> {
    require_levy(params, "level_density_mixture")?;
    let n = params.n();
    let alpha = params.alpha();
    let lambda = params.lambda();
    let lg = ln_gamma(lambda);
    // rho_sc(E; a') vanishes once a' E^2 >= N
    let edge = if e == 0.0 { f64::INFINITY } else { n as f64 * lambda / (alpha * e * e) };
    let top = edge.min(xi_max(lambda));
    let r = tanh_sinh_with_distances(
        |xi, _, _| gamma_weight(xi, lambda, lg) * semicircle_density(e, n, alpha * xi / lambda),
        0.0,
        top,
        ABS_TOL,
        REL_TOL,
    )?;
    Ok(r)
}

/// Expected number of levels in `(-theta, theta)`, `s(theta) = 2 int_0^theta rho`.
///
/// Levy branch: `(1/Gamma(lambda)) int e^{-xi} xi^{lambda-1} y(sqrt(2 alpha xi/lambda) theta) dxi`,
/// split where the argument of `y` reaches the semicircle edge. Gaussian
/// regime: `y(sqrt(2 alpha) theta)`.
pub fn integrated_density(theta: f64, params: &EnsembleParams) -> Result<QuadratureResult> {
    if !(theta >= 0.0) {
        return Err(Error::Invalid(format!("theta must be >= 0, got {theta}")));
    }
    mixture_of_counting(theta, params, |y| y)
}

/// `(1/Gamma(lambda)) int e^{-xi} xi^{lambda-1} g(y(sqrt(2 alpha xi/lambda) theta)) dxi`.
pub(crate) fn mixture_of_counting(
    theta: f64,
    params: &EnsembleParams,
    g: impl Fn(f64) -> f64,
) -> Result<QuadratureResult> {
    let n = params.n();
    let alpha = params.alpha();
    if params.regime() == Regime::Gaussian {
        let v = g(goe_counting((2.0 * alpha).sqrt() * theta, n));
        return Ok(QuadratureResult { value: v, abs_error_estimate: 0.0, evaluations: 1 });
    }
    require_levy(params, "integrated_density")?;
    let lambda = params.lambda();
    let lg = ln_gamma(lambda);
    if theta == 0.0 {
        return Ok(QuadratureResult { value: g(0.0), abs_error_estimate: 0.0, evaluations: 1 });
    }
    let scale = (2.0 * alpha / lambda).sqrt() * theta;
    let kink = n as f64 * lambda / (alpha * theta * theta);
    let cut = xi_max(lambda);
    let full = g(n as f64);
    let mut parts = Vec::with_capacity(2);
    parts.push(tanh_sinh_with_distances(
        |xi, _, _| gamma_weight(xi, lambda, lg) * g(goe_counting(scale * xi.sqrt(), n)),
        0.0,
        kink.min(cut),
        ABS_TOL,
        REL_TOL,
    )?);
    if kink < cut && full != 0.0 {
        let tail = tanh_sinh_with_distances(|xi, _, _| gamma_weight(xi, lambda, lg), kink, cut, ABS_TOL, REL_TOL)?;
        parts.push(tail.scaled(full));
    }
    Ok(sum_results(parts))
}
