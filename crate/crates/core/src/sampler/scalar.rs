//! Scalar variates.
//!
//! Normals come from the ziggurat in `rand_distr`. Gamma uses
//! Marsaglia-Tsang, with the `U^{1/shape}` boost below shape 1; Beta is the
//! Gamma ratio. The symmetric stable law uses the Chambers-Mallows-Stuck
//! transform and Student t uses Bailey's polar method, which shares no code
//! with the Gamma-mixture route and so serves as its cross-check.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Uniform on the half-open interval `(0, 1]`, safe for `ln`.
#[inline]
pub(crate) fn open_uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

#[inline]
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn sample_gaussian<R: Rng + ?Sized>(mean: f64, variance: f64, rng: &mut R) -> Result<f64> {
    if !(variance > 0.0) || !variance.is_finite() || !mean.is_finite() {
        return Err(Error::Invalid(format!("gaussian needs finite mean and variance > 0, got {mean}, {variance}")));
    }
    Ok(mean + variance.sqrt() * standard_normal(rng))
}

/// Gamma(shape, 1).
pub fn sample_gamma<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> Result<f64> {
    if !(shape > 0.0) || !shape.is_finite() {
        return Err(Error::Invalid(format!("gamma shape must be finite and > 0, got {shape}")));
    }
    Ok(gamma_unchecked(shape, rng))
}

pub(crate) fn gamma_unchecked<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    if shape < 1.0 {
        let boost = open_uniform(rng).powf(1.0 / shape);
        return gamma_unchecked(shape + 1.0, rng) * boost;
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = standard_normal(rng);
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u = open_uniform(rng);
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// Beta(a, b) as `X/(X+Y)` with independent Gamma variates.
pub fn sample_beta<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Invalid(format!("beta parameters must be finite and > 0, got {a}, {b}")));
    }
    Ok(beta_unchecked(a, b, rng))
}

pub(crate) fn beta_unchecked<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> f64 {
    loop {
        let x = gamma_unchecked(a, rng);
        let y = gamma_unchecked(b, rng);
        let s = x + y;
        if s > 0.0 {
            return x / s;
        }
    }
}

/// Symmetric stable variate with characteristic function
/// `exp(-|scale k|^sigma)`.
///
/// `sigma = 2` gives a normal of variance `2 scale^2`, `sigma = 1` a Cauchy
/// of half-width `scale`.
pub fn sample_levy_stable<R: Rng + ?Sized>(sigma: f64, scale: f64, rng: &mut R) -> Result<f64> {
    if !(sigma > 0.0 && sigma <= 2.0) || !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::Invalid(format!("stable law needs 0 < sigma <= 2 and scale > 0, got {sigma}, {scale}")));
    }
    let v = PI * (rng.random::<f64>() - 0.5);
    let w = -open_uniform(rng).ln();
    let x = if sigma == 1.0 {
        v.tan()
    } else {
        (sigma * v).sin() / v.cos().powf(1.0 / sigma) * ((v - sigma * v).cos() / w).powf((1.0 - sigma) / sigma)
    };
    Ok(scale * x)
}

/// Student t with `nu` degrees of freedom by Bailey's polar method.
pub fn sample_student_t<R: Rng + ?Sized>(nu: f64, rng: &mut R) -> Result<f64> {
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::Invalid(format!("student t needs nu > 0, got {nu}")));
    }
    loop {
        let u = 2.0 * rng.random::<f64>() - 1.0;
        let v = 2.0 * rng.random::<f64>() - 1.0;
        let w = u * u + v * v;
        if w > 0.0 && w < 1.0 {
            return Ok(u * (nu * (w.powf(-2.0 / nu) - 1.0) / w).sqrt());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::RngStream;

    fn moments(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
        (m, v)
    }

    fn ks_to(xs: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
        xs.sort_by(|a, b| a.total_cmp(b));
        let n = xs.len() as f64;
        xs.iter()
            .enumerate()
            .map(|(i, &x)| {
                let c = cdf(x);
                (c - i as f64 / n).abs().max(((i + 1) as f64 / n - c).abs())
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn gaussian_moments_and_determinism() {
        let mut rng = RngStream::new(1, 0).rng();
        let xs: Vec<f64> = (0..1_000_000).map(|_| sample_gaussian(0.0, 1.0, &mut rng).unwrap()).collect();
        let (m, _) = moments(&xs);
        assert!(m.abs() < 4.0 / 1000.0);
        let mut rng = RngStream::new(1, 1).rng();
        let ys: Vec<f64> = (0..1_000_000).map(|_| sample_gaussian(0.0, 0.5, &mut rng).unwrap()).collect();
        let (_, v) = moments(&ys);
        assert!((v - 0.5).abs() < 0.005);
        let mut rng = RngStream::new(1, 0).rng();
        let again: Vec<f64> = (0..100).map(|_| sample_gaussian(0.0, 1.0, &mut rng).unwrap()).collect();
        assert_eq!(&xs[..100], &again[..]);
        assert!(sample_gaussian(0.0, 0.0, &mut rng).is_err());
    }

    #[test]
    fn gamma_moments() {
        let mut rng = RngStream::new(2, 0).rng();
        let xs: Vec<f64> = (0..1_000_000).map(|_| sample_gamma(1.0, &mut rng).unwrap()).collect();
        let (m, v) = moments(&xs);
        assert!((m - 1.0).abs() < 0.01 && (v - 1.0).abs() < 0.01, "{m} {v}");
        let xs: Vec<f64> = (0..1_000_000).map(|_| sample_gamma(0.5, &mut rng).unwrap()).collect();
        let (m, v) = moments(&xs);
        assert!((m - 0.5).abs() < 0.005 && (v - 0.5).abs() < 0.005, "{m} {v}");
        let xs: Vec<f64> = (0..200_000).map(|_| sample_gamma(7.3, &mut rng).unwrap()).collect();
        let (m, v) = moments(&xs);
        assert!((m - 7.3).abs() < 0.03 && (v - 7.3).abs() < 0.15, "{m} {v}");
        assert!(sample_gamma(0.0, &mut rng).is_err());
    }

    #[test]
    fn beta_matches_inverse_cdf() {
        let mut rng = RngStream::new(3, 0).rng();
        let mut xs: Vec<f64> = (0..100_000).map(|_| sample_beta(1.5, 1.0, &mut rng).unwrap()).collect();
        assert!(ks_to(&mut xs, |u| u.clamp(0.0, 1.0).powf(1.5)) < 0.005);
    }

    #[test]
    fn stable_special_cases() {
        let mut rng = RngStream::new(4, 0).rng();
        let mut xs: Vec<f64> = (0..100_000).map(|_| sample_levy_stable(1.0, 1.0, &mut rng).unwrap()).collect();
        assert!(ks_to(&mut xs, |x| 0.5 + x.atan() / PI) < 0.01);
        let ys: Vec<f64> = (0..400_000).map(|_| sample_levy_stable(2.0, 1.5, &mut rng).unwrap()).collect();
        let (m, v) = moments(&ys);
        assert!(m.abs() < 0.02 && (v / (2.0 * 1.5 * 1.5) - 1.0).abs() < 0.01, "{m} {v}");
    }

    #[test]
    fn stable_characteristic_function() {
        let mut rng = RngStream::new(5, 0).rng();
        let c = 0.8;
        let xs: Vec<f64> = (0..1_000_000).map(|_| sample_levy_stable(1.5, c, &mut rng).unwrap()).collect();
        for &k in &[0.5, 1.0, 2.0] {
            let emp = xs.iter().map(|x| (k * x).cos()).sum::<f64>() / xs.len() as f64;
            let want = (-(c * k).abs().powf(1.5)).exp();
            assert!((emp - want).abs() < 0.01, "k={k}: {emp} vs {want}");
        }
    }

    #[test]
    fn student_t_nu_one_is_cauchy() {
        let mut rng = RngStream::new(6, 0).rng();
        let mut xs: Vec<f64> = (0..100_000).map(|_| sample_student_t(1.0, &mut rng).unwrap()).collect();
        assert!(ks_to(&mut xs, |x| 0.5 + x.atan() / PI) < 0.01);
        let ys: Vec<f64> = (0..400_000).map(|_| sample_student_t(6.0, &mut rng).unwrap()).collect();
        let (_, v) = moments(&ys);
        assert!((v - 1.5).abs() < 0.03, "{v}");
    }
}
