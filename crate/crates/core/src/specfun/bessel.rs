//! Modified Bessel function of the second kind `K_nu(z)` for real order.
//!
//! Temme's method: reduce to `mu = nu - round(nu)` in `[-1/2, 1/2]`, get
//! `K_mu` and `K_{mu+1}` from
//!
//! * the Temme series when `z <= 2`,
//! * Steed's continued fraction (CF2) when `z > 2`,
//!
//! then climb to `K_nu` with the forward recurrence
//! `K_{m+1} = (2m/z) K_m + K_{m-1}`, which is stable for `K`. The climb is
//! done on ratios so [`ln_bessel_k`] never overflows, even for `nu = 50`
//! and tiny `z`.

use std::f64::consts::PI;

use super::gamma::temme_gammas;
use crate::error::NumericError;

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 10_000;
const SERIES_SWITCH: f64 = 2.0;

fn check(nu: f64, z: f64) -> Result<(), NumericError> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(NumericError::Domain { func: "bessel_k", detail: format!("z={z} must be > 0") });
    }
    if !nu.is_finite() {
        return Err(NumericError::Domain { func: "bessel_k", detail: format!("nu={nu}") });
    }
    Ok(())
}

/// Returns `(ln K_mu(z), K_{mu+1}(z) / K_mu(z))` for `|mu| <= 1/2`.
fn k_mu_pair(mu: f64, z: f64) -> Result<(f64, f64), NumericError> {
    if z <= SERIES_SWITCH {
        let x2 = 0.5 * z;
        let pimu = PI * mu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = mu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = 0.5 * ee / gampl;
        let mut q = 0.5 / (ee * gammi);
        let mut c = 1.0;
        let dd = x2 * x2;
        let mut sum1 = p;
        let mu2 = mu * mu;
        let mut converged = false;
        for i in 1..=MAX_ITER {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - mu2);
            c *= dd / fi;
            p /= fi - mu;
            q /= fi + mu;
            let del = c * ff;
            sum += del;
            let del1 = c * (p - fi * ff);
            sum1 += del1;
            if del.abs() < sum.abs() * EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(NumericError::NoConvergence { func: "bessel_k/temme", iterations: MAX_ITER });
        }
        let k_mu = sum;
        let k_mu1 = sum1 * 2.0 / z;
        Ok((k_mu.ln(), k_mu1 / k_mu))
    } else {
        let mu2 = mu * mu;
        let mut b = 2.0 * (1.0 + z);
        let mut d = 1.0 / b;
        let mut delh = d;
        let mut h = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - mu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        let mut converged = false;
        for i in 2..=MAX_ITER {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh *= b * d - 1.0;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(NumericError::NoConvergence { func: "bessel_k/steed", iterations: MAX_ITER });
        }
        h *= a1;
        let ln_k_mu = 0.5 * (PI / (2.0 * z)).ln() - z - s.ln();
        let ratio = (mu + z + 0.5 - h) / z;
        Ok((ln_k_mu, ratio))
    }
}

/// `ln K_nu(z)` for real `nu` and `z > 0`.
pub fn ln_bessel_k(nu: f64, z: f64) -> Result<f64, NumericError> {
    check(nu, z)?;
    let nu = nu.abs();
    let steps = (nu + 0.5).floor();
    let mu = nu - steps;
    let (mut ln_k, mut ratio) = k_mu_pair(mu, z)?;
    // ratio_m = K_{m+1}/K_m; K_{m+2}/K_{m+1} = 2(m+1)/z + 1/ratio_m
    let mut order = mu;
    for _ in 0..steps as usize {
        ln_k += ratio.ln();
        order += 1.0;
        ratio = 2.0 * order / z + 1.0 / ratio;
    }
    Ok(ln_k)
}

/// `K_nu(z)` for real `nu` and `z > 0`. Overflows to `+inf` rather than
/// erroring when the true value exceeds `f64::MAX`.
pub fn bessel_k(nu: f64, z: f64) -> Result<f64, NumericError> {
    Ok(ln_bessel_k(nu, z)?.exp())
}
