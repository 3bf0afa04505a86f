//! Confluent hypergeometric function `M(a, b, z)` for `z <= 0`.
//!
//! Writing `x = -z`, four routes are available:
//!
//! * `Series`: the defining series. Alternating in sign, so it is only
//!   accepted when the sum of absolute terms exceeds the result by less than
//!   `1e3`. Tried for `x <= 1`, and always used when `a` is a nonpositive
//!   integer (then every term is positive and the series terminates).
//! * `KummerSeries`: `M(a,b,-x) = e^{-x} M(b-a, b, x)`. For `b > a` every
//!   term is positive, so the sum is well conditioned at any `x`. Summed
//!   with a running log scale so `x` in the hundreds never overflows.
//! * `Asymptotic`: `Gamma(b)/Gamma(b-a) x^{-a} sum_s (a)_s (a-b+1)_s / (s! x^s)`.
//!   Taken whenever the series reaches `1e-17` relative before its terms
//!   start growing and the dropped `e^{-x}` contribution is below `1e-17`
//!   relative. With `a <= 51` this covers roughly `x >= 200`.
//! * `Terminating`: `b - a = -m` a nonpositive integer, so the transformed
//!   series is a degree-`m` polynomial.
//!
//! Accuracy holds across `0 < a < b`. For `a > b` with `b - a` not an
//! integer the Kummer series cancels badly at moderate `x`, and results there
//! are best effort.

use super::gamma::ln_gamma;
use crate::error::NumericError;

const MAX_TERMS: usize = 2_000_000;
const ASYMPTOTIC_MAX_TERMS: usize = 500;
const SERIES_MAX_X: f64 = 1.0;
const SERIES_CONDITION_LIMIT: f64 = 1e3;
const RESCALE: f64 = 1e200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KummerRoute {
    Series,
    KummerSeries,
    Asymptotic,
    Terminating,
}

/// `value = mantissa * exp(ln_scale)`.
#[derive(Debug, Clone, Copy)]
struct Scaled {
    mantissa: f64,
    ln_scale: f64,
}

impl Scaled {
    fn value(self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa * self.ln_scale.exp()
        }
    }
}

fn is_nonpositive_integer(v: f64) -> bool {
    v <= 0.0 && v == v.round()
}

fn check(a: f64, b: f64, z: f64) -> Result<(), NumericError> {
    if !a.is_finite() || !b.is_finite() || z.is_nan() {
        return Err(NumericError::Domain { func: "kummer_m", detail: format!("a={a}, b={b}, z={z}") });
    }
    if is_nonpositive_integer(b) {
        return Err(NumericError::Domain { func: "kummer_m", detail: format!("b={b} is a nonpositive integer") });
    }
    if z > 0.0 {
        return Err(NumericError::Domain { func: "kummer_m", detail: format!("z={z} must be <= 0") });
    }
    Ok(())
}

/// Direct series; `None` when the result is ill-conditioned.
fn direct_series(a: f64, b: f64, x: f64, force: bool) -> Option<Scaled> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut abs_sum = 1.0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let ratio = -(a + kf) * x / ((b + kf) * (kf + 1.0));
        term *= ratio;
        sum += term;
        abs_sum += term.abs();
        if term == 0.0 || (term.abs() < 1e-17 * sum.abs() && ratio.abs() < 1.0) {
            break;
        }
        if !abs_sum.is_finite() {
            return None;
        }
    }
    if !force && abs_sum > SERIES_CONDITION_LIMIT * sum.abs() {
        return None;
    }
    Some(Scaled { mantissa: sum, ln_scale: 0.0 })
}

/// `e^{-x} M(b-a, b, x)` summed with a running scale.
fn kummer_series(a: f64, b: f64, x: f64) -> Option<Scaled> {
    let c = b - a;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut ln_scale = -x;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let ratio = (c + kf) * x / ((b + kf) * (kf + 1.0));
        term *= ratio;
        sum += term;
        if term == 0.0 || (term.abs() < 1e-17 * sum.abs() && ratio.abs() < 1.0) {
            return Some(Scaled { mantissa: sum, ln_scale });
        }
        if sum.abs() > RESCALE {
            sum /= RESCALE;
            term /= RESCALE;
            ln_scale += RESCALE.ln();
        }
    }
    None
}

/// Terminating polynomial `e^{-x} M(-m, b, x)`.
fn terminating(a: f64, b: f64, x: f64) -> Scaled {
    let c = b - a;
    let m = (-c).round() as usize;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..m {
        let kf = k as f64;
        term *= (c + kf) * x / ((b + kf) * (kf + 1.0));
        sum += term;
    }
    Scaled { mantissa: sum, ln_scale: -x }
}

/// Algebraic asymptotic series; `None` unless it converges and the
/// exponentially small companion term is negligible. Needs `a > 0`, `b > a`.
fn asymptotic(a: f64, b: f64, x: f64) -> Option<Scaled> {
    let c = b - a;
    if !(a > 0.0 && c > 0.0) || x <= 0.0 {
        return None;
    }
    let ln_companion = ln_gamma(c) - ln_gamma(a) - x + (2.0 * a - b) * x.ln();
    if ln_companion > -39.0 {
        return None;
    }
    let e = a - b + 1.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut converged = false;
    for s in 0..ASYMPTOTIC_MAX_TERMS {
        let sf = s as f64;
        let next = term * (a + sf) * (e + sf) / ((sf + 1.0) * x);
        if next == 0.0 {
            converged = true;
            break;
        }
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    Some(Scaled { mantissa: sum, ln_scale: ln_gamma(b) - ln_gamma(c) - a * x.ln() })
}

fn auto(a: f64, b: f64, x: f64) -> Result<(Scaled, KummerRoute), NumericError> {
    if x == 0.0 {
        return Ok((Scaled { mantissa: 1.0, ln_scale: 0.0 }, KummerRoute::Series));
    }
    if is_nonpositive_integer(a) {
        let s = direct_series(a, b, x, true).expect("forced series always returns");
        return Ok((s, KummerRoute::Series));
    }
    if is_nonpositive_integer(b - a) {
        return Ok((terminating(a, b, x), KummerRoute::Terminating));
    }
    if x <= SERIES_MAX_X {
        if let Some(s) = direct_series(a, b, x, false) {
            return Ok((s, KummerRoute::Series));
        }
    }
    if let Some(s) = asymptotic(a, b, x) {
        return Ok((s, KummerRoute::Asymptotic));
    }
    if let Some(s) = kummer_series(a, b, x) {
        return Ok((s, KummerRoute::KummerSeries));
    }
    Err(NumericError::NoConvergence { func: "kummer_m", iterations: MAX_TERMS })
}

/// `M(a, b, z)` for `z <= 0`.
pub fn kummer_m(a: f64, b: f64, z: f64) -> Result<f64, NumericError> {
    check(a, b, z)?;
    Ok(auto(a, b, -z)?.0.value())
}

/// The route [`kummer_m`] picks for these arguments.
pub fn kummer_m_route(a: f64, b: f64, z: f64) -> Result<KummerRoute, NumericError> {
    check(a, b, z)?;
    Ok(auto(a, b, -z)?.1)
}

/// `M(a, b, z)` through one specific route. Fails when the route does not
/// apply or does not converge for these arguments.
pub fn kummer_m_via(a: f64, b: f64, z: f64, route: KummerRoute) -> Result<f64, NumericError> {
    check(a, b, z)?;
    let x = -z;
    let not_applicable = || NumericError::Domain {
        func: "kummer_m_via",
        detail: format!("route {route:?} does not apply at a={a}, b={b}, z={z}"),
    };
    let s = match route {
        KummerRoute::Series => direct_series(a, b, x, true),
        KummerRoute::KummerSeries => kummer_series(a, b, x),
        KummerRoute::Asymptotic => asymptotic(a, b, x),
        KummerRoute::Terminating => is_nonpositive_integer(b - a).then(|| terminating(a, b, x)),
    };
    s.map(Scaled::value).ok_or_else(not_applicable)
}

/// `x^a M(a, b, -x)` for `x >= 0`, without overflow when `x^a` alone would.
/// At `x = +inf` this is the limit `Gamma(b)/Gamma(b-a)` (requires `b > a`).
pub fn kummer_m_power_scaled(a: f64, b: f64, x: f64) -> Result<f64, NumericError> {
    if x == f64::INFINITY {
        if b - a > 0.0 {
            return Ok((ln_gamma(b) - ln_gamma(b - a)).exp());
        }
        return Err(NumericError::Domain {
            func: "kummer_m_power_scaled",
            detail: format!("infinite argument needs b > a (a={a}, b={b})"),
        });
    }
    check(a, b, -x)?;
    if x == 0.0 {
        return Ok(if a > 0.0 {
            0.0
        } else if a == 0.0 {
            1.0
        } else {
            f64::INFINITY
        });
    }
    let (s, _) = auto(a, b, x)?;
    Ok(Scaled { mantissa: s.mantissa, ln_scale: s.ln_scale + a * x.ln() }.value())
}
