//! Symmetric Lévy stable density
//! `L(x; sigma, Lambda) = (1/pi) int_0^inf exp(-Lambda t^sigma) cos(x t) dt`.
//!
//! Scaling `t -> Lambda^{-1/sigma} t` reduces to `Lambda = 1`. The integral is
//! cut at the zeros `t_k = (k + 1/2) pi / y` of `cos(y t)`: the first piece is
//! done by tanh-sinh (it holds the `t^sigma` cusp at the origin), later
//! half-periods by Gauss-Kronrod. The alternating tail of half-period
//! contributions is summed with Euler's repeated averaging of partial sums.

use std::f64::consts::PI;

use super::gamma::ln_gamma;
use super::quad::{gauss_kronrod, tanh_sinh};
use crate::error::NumericError;

const PIECE_TOL: f64 = 1e-15;
/// `exp(-t^sigma)` is below `1e-20` once `t^sigma > 46`.
const NEGLIGIBLE_EXPONENT: f64 = 46.0;
const EULER_PIECES: usize = 64;
const EULER_WINDOW: usize = 32;

fn unit_density(y: f64, sigma: f64) -> Result<f64, NumericError> {
    let g = |t: f64| (-t.powf(sigma)).exp() * (y * t).cos();
    let t_cut = NEGLIGIBLE_EXPONENT.powf(1.0 / sigma);
    let t0 = 0.5 * PI / y;

    let head_end = t0.min(t_cut);
    let knee = head_end.min(1.0);
    let mut total = tanh_sinh(g, 0.0, knee, 0.0, PIECE_TOL)?.value;
    if head_end > knee {
        total += gauss_kronrod(g, knee, head_end, 1e-17, PIECE_TOL)?.value;
    }
    if t0 >= t_cut {
        return Ok(total / PI);
    }

    let half_period = PI / y;
    let mut partial = Vec::with_capacity(EULER_PIECES);
    let mut sum = total;
    for k in 0..EULER_PIECES {
        let a = t0 + k as f64 * half_period;
        if a >= t_cut {
            return Ok(sum / PI);
        }
        sum += gauss_kronrod(g, a, a + half_period, 1e-18, PIECE_TOL)?.value;
        partial.push(sum);
    }
    let mut window: Vec<f64> = partial[EULER_PIECES - EULER_WINDOW..].to_vec();
    while window.len() > 1 {
        window = window.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    }
    Ok(window[0] / PI)
}

/// Symmetric stable density with characteristic function
/// `exp(-Lambda |k|^sigma)`, `0 < sigma <= 2`, `Lambda > 0`.
pub fn levy_density(x: f64, sigma: f64, big_lambda: f64) -> Result<f64, NumericError> {
    if !(sigma > 0.0 && sigma <= 2.0) || !(big_lambda > 0.0) || !x.is_finite() || !big_lambda.is_finite() {
        return Err(NumericError::Domain {
            func: "levy_density",
            detail: format!("x={x}, sigma={sigma}, Lambda={big_lambda}"),
        });
    }
    if sigma == 2.0 {
        return Ok((-x * x / (4.0 * big_lambda)).exp() / (2.0 * (PI * big_lambda).sqrt()));
    }
    if sigma == 1.0 {
        return Ok(big_lambda / (PI * (big_lambda * big_lambda + x * x)));
    }
    let scale = big_lambda.powf(1.0 / sigma);
    if x == 0.0 {
        return Ok(ln_gamma(1.0 + 1.0 / sigma).exp() / (PI * scale));
    }
    Ok(unit_density(x.abs() / scale, sigma)? / scale)
}
