//! Whole-matrix laws: partition function, matrix density and the joint
//! eigenvalue density.
//!
//! Densities of `H` are with respect to the Lebesgue measure on the
//! isometric coordinates of [`SymMatrix::to_f_vector`], in which
//! `tr H^2 = |x|^2`. With that measure the Gaussian normalization is
//! `(pi/alpha)^{f/2}` and a one-dimensional ensemble is an ordinary density.

use std::f64::consts::PI;

use crate::error::{Error, NumericError, Result};
use crate::matrix::SymMatrix;
use crate::params::{EnsembleParams, Regime};
use crate::specfun::ln_gamma;
use crate::specfun::quad::{integrate_to_infinity, tanh_sinh_with_distances, QuadratureResult};

/// `ln Z_N`.
///
/// * `q < 1`: `(f/2) ln(-pi lambda/alpha) + ln Gamma(p+1) - ln Gamma(1-lambda)`, `p = -(lambda + f/2)`
/// * `q > 1`: `(f/2) ln(pi lambda/alpha) + ln Gamma(lambda) - ln Gamma(lambda + f/2)`
/// * `q = 1`: `(f/2) ln(pi/alpha)`
pub fn log_partition(params: &EnsembleParams) -> f64 {
    let half_f = 0.5 * params.f() as f64;
    let lambda = params.lambda();
    let alpha = params.alpha();
    match params.regime() {
        Regime::Gaussian => half_f * (PI / alpha).ln(),
        Regime::LevyBranch => half_f * (PI * lambda / alpha).ln() + ln_gamma(lambda) - ln_gamma(lambda + half_f),
        Regime::RestrictedTrace => {
            half_f * (-PI * lambda / alpha).ln() + ln_gamma(params.power() + 1.0) - ln_gamma(1.0 - lambda)
        }
    }
}

/// `ln P(H)`, or `-inf` outside the support.
pub fn ln_matrix_pdf_of_trace_sq(trace_sq: f64, params: &EnsembleParams) -> f64 {
    let alpha = params.alpha();
    let lambda = params.lambda();
    let ln_z = log_partition(params);
    match params.regime() {
        Regime::Gaussian => -alpha * trace_sq - ln_z,
        Regime::LevyBranch => -(lambda + 0.5 * params.f() as f64) * (alpha * trace_sq / lambda).ln_1p() - ln_z,
        Regime::RestrictedTrace => {
            let t = alpha * trace_sq / -lambda;
            if t >= 1.0 {
                return f64::NEG_INFINITY;
            }
            let p = params.power();
            // 0^0 = 1 on the bounded-trace ensemble
            let body = if p == 0.0 { 0.0 } else { p * (-t).ln_1p() };
            body - ln_z
        }
    }
}

/// `P(H) = Z^{-1} (1 + (alpha/lambda) tr H^2)^{1/(1-q)}`, zero outside the
/// ball when `q < 1`; `exp(-alpha tr H^2)/Z` in the Gaussian regime.
pub fn matrix_pdf(h: &SymMatrix, params: &EnsembleParams) -> Result<f64> {
    if h.n() != params.n() {
        return Err(Error::Invalid(format!("matrix is {}x{}, ensemble has N={}", h.n(), h.n(), params.n())));
    }
    Ok(ln_matrix_pdf_of_trace_sq(h.trace_sq(), params).exp())
}

/// `ln K_GOE` for `N` levels at `alpha`, from the closed form
/// `1/K_GOE(1/2) = (2 pi)^{N/2} prod_{j=1..N} Gamma(1+j/2)/Gamma(3/2)`
/// and `K_GOE(alpha) = (2 alpha)^{f/2} K_GOE(1/2)`.
pub fn ln_goe_constant(n: usize, alpha: f64) -> f64 {
    let nf = n as f64;
    let f = nf * (nf + 1.0) / 2.0;
    let ln_inv: f64 =
        0.5 * nf * (2.0 * PI).ln() + (1..=n).map(|j| ln_gamma(1.0 + 0.5 * j as f64) - ln_gamma(1.5)).sum::<f64>();
    0.5 * f * (2.0 * alpha).ln() - ln_inv
}

fn ln_vandermonde(e: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            s += (e[j] - e[i]).abs().ln();
        }
    }
    s
}

/// GOE joint eigenvalue density `K exp(-alpha sum E^2) prod |E_j - E_i|`.
pub fn goe_joint_density(e: &[f64], alpha: f64) -> f64 {
    let s2: f64 = e.iter().map(|x| x * x).sum();
    (ln_goe_constant(e.len(), alpha) - alpha * s2 + ln_vandermonde(e)).exp()
}

/// `ln K_N` of the joint eigenvalue density.
pub fn ln_joint_constant(params: &EnsembleParams) -> Result<f64> {
    let n = params.n();
    let half_f = 0.5 * params.f() as f64;
    let alpha = params.alpha();
    let lambda = params.lambda();
    let k_goe = ln_goe_constant(n, 0.5);
    match params.regime() {
        Regime::LevyBranch => {
            Ok(half_f * (2.0 * alpha / lambda).ln() + ln_gamma(lambda + half_f) - ln_gamma(lambda) + k_goe)
        }
        Regime::RestrictedTrace => {
            Ok(half_f * (2.0 * alpha / -lambda).ln() + ln_gamma(1.0 - lambda) - ln_gamma(params.power() + 1.0) + k_goe)
        }
        Regime::Gaussian => Ok(ln_goe_constant(n, alpha)),
    }
}

fn check_levels(e: &[f64], params: &EnsembleParams) -> Result<()> {
    if e.len() != params.n() {
        return Err(Error::Invalid(format!("{} eigenvalues given, ensemble has N={}", e.len(), params.n())));
    }
    Ok(())
}

/// `K_N (1 + (alpha/lambda) sum E^2)^{1/(1-q)} prod |E_j - E_i|`, symmetric
/// in its arguments. The Gaussian regime returns the GOE density.
pub fn joint_eigen_density(e: &[f64], params: &EnsembleParams) -> Result<f64> {
    check_levels(e, params)?;
    if params.regime() == Regime::Gaussian {
        return Ok(goe_joint_density(e, params.alpha()));
    }
    let s2: f64 = e.iter().map(|x| x * x).sum();
    let t = params.alpha() * s2 / params.lambda();
    if t <= -1.0 {
        return Ok(0.0);
    }
    let body = if params.power() == 0.0 { 0.0 } else { params.power() * t.ln_1p() };
    Ok((ln_joint_constant(params)? + body + ln_vandermonde(e)).exp())
}

/// Which `xi`-integral representation [`joint_eigen_density_mixture`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixtureForm {
    /// `K_N/Gamma(lambda+f/2) int e^{-xi} xi^{lambda+f/2-1} exp(-(alpha/lambda) xi sum E^2) dxi prod |dE|`
    MatrixExponent,
    /// `(2 alpha/lambda)^{N/2}/Gamma(lambda) int e^{-xi} xi^{lambda+N/2-1} P_GOE(sqrt(xi) x; 1/2) dxi`
    /// with `x = sqrt(2 alpha/lambda) E`.
    RescaledGoe,
}

/// Levy-branch joint density evaluated through one of its Gamma-mixture
/// representations, by quadrature over `xi`.
pub fn joint_eigen_density_mixture(e: &[f64], params: &EnsembleParams, form: MixtureForm) -> Result<QuadratureResult> {
    check_levels(e, params)?;
    if params.regime() != Regime::LevyBranch {
        return Err(Error::WrongRegime { op: "joint_eigen_density_mixture", regime: params.regime().name() });
    }
    let lambda = params.lambda();
    let alpha = params.alpha();
    let nf = params.n() as f64;
    let half_f = 0.5 * params.f() as f64;
    let s2: f64 = e.iter().map(|x| x * x).sum();
    let integrate = |g: &dyn Fn(f64) -> f64| -> std::result::Result<QuadratureResult, NumericError> {
        // the integrand is a Gamma-like bump; split at its bulk and map the tail
        let cut = (lambda + half_f) + 20.0 * (lambda + half_f).sqrt() + 50.0;
        let head = tanh_sinh_with_distances(|_, xi, _| g(xi), 0.0, cut, 1e-300, 1e-12)?;
        let tail = integrate_to_infinity(g, cut, 1e-300, 1e-12)?;
        Ok(crate::specfun::quad::sum_results([head, tail]))
    };
    let r = match form {
        MixtureForm::MatrixExponent => {
            let ln_pre = ln_joint_constant(params)? - ln_gamma(lambda + half_f) + ln_vandermonde(e);
            integrate(&|xi: f64| {
                if xi <= 0.0 {
                    return 0.0;
                }
                (ln_pre - xi + (lambda + half_f - 1.0) * xi.ln() - alpha * xi * s2 / lambda).exp()
            })?
        }
        MixtureForm::RescaledGoe => {
            let scale = (2.0 * alpha / lambda).sqrt();
            let x: Vec<f64> = e.iter().map(|v| scale * v).collect();
            let ln_pre = 0.5 * nf * (2.0 * alpha / lambda).ln() - ln_gamma(lambda);
            integrate(&|xi: f64| {
                if xi <= 0.0 {
                    return 0.0;
                }
                let r = xi.sqrt();
                let y: Vec<f64> = x.iter().map(|v| r * v).collect();
                let goe = goe_joint_density(&y, 0.5);
                if goe == 0.0 {
                    return 0.0;
                }
                (ln_pre - xi + (lambda + 0.5 * nf - 1.0) * xi.ln()).exp() * goe
            })?
        }
    };
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::quad::gauss_kronrod;

    #[test]
    fn partition_examples() {
        let p = EnsembleParams::from_lambda(1, 0.5, 0.5).unwrap();
        assert!((log_partition(&p).exp() - PI).abs() < 1e-13);
        let p = EnsembleParams::from_lambda(1, 2.0, 1.0).unwrap();
        let z = log_partition(&p).exp();
        let closed = (2.0 * PI).sqrt() * crate::specfun::gamma(2.0) / crate::specfun::gamma(2.5);
        let quad = 2.0 * integrate_to_infinity(|x| (1.0 + x * x / 2.0).powf(-2.5), 0.0, 1e-14, 1e-13).unwrap().value;
        assert!((z - closed).abs() < 1e-12);
        assert!((z - quad).abs() < 1e-8);
    }

    #[test]
    fn partition_gaussian_limit() {
        // Stirling: Z/Z_GOE = 1 - (f/2)(f/2 - 1)/(2 lambda) + O(lambda^-2)
        let alpha = 0.7;
        let goe = log_partition(&EnsembleParams::gaussian(4, alpha).unwrap());
        let lead = 5.0 * 4.0 / 2.0;
        let mut prev = f64::INFINITY;
        for &lam in &[1e2, 1e4, 1e6] {
            let l = log_partition(&EnsembleParams::from_lambda(4, lam, alpha).unwrap());
            let err = (l - goe).exp_m1().abs();
            assert!(err < prev);
            assert!((err * lam / lead - 1.0).abs() < 0.2, "lambda={lam}: {err}");
            prev = err;
        }
        assert!(prev < 2e-5);
    }

    #[test]
    fn f_one_integrates_to_one() {
        for p in [
            EnsembleParams::from_lambda(1, 0.3, 2.0).unwrap(),
            EnsembleParams::from_lambda(1, 4.0, 0.5).unwrap(),
            EnsembleParams::from_q(1, 0.5, 1.5).unwrap(),
            EnsembleParams::from_q(1, -2.0, 1.0).unwrap(),
            EnsembleParams::bounded_trace(1, 0.8).unwrap(),
            EnsembleParams::gaussian(1, 3.0).unwrap(),
        ] {
            let pdf = |x: f64| ln_matrix_pdf_of_trace_sq(x * x, &p).exp();
            let mass = match p.trace_bound() {
                Some(b) => tanh_sinh_with_distances(|x, _, _| pdf(x), -b.sqrt(), b.sqrt(), 1e-15, 1e-12).unwrap().value,
                None => 2.0 * integrate_to_infinity(pdf, 0.0, 1e-15, 1e-12).unwrap().value,
            };
            assert!((mass - 1.0).abs() < 1e-8, "{:?}: {mass}", p.regime());
        }
    }

    #[test]
    fn bounded_trace_is_uniform_on_ball() {
        // n = 2: f = 3, ball of radius sqrt(f/(2 alpha)) in R^3
        let alpha = 1.5;
        let p = EnsembleParams::bounded_trace(2, alpha).unwrap();
        let r2 = 3.0 / (2.0 * alpha);
        let vol = 4.0 / 3.0 * PI * r2.powf(1.5);
        let h = SymMatrix::from_upper(2, |i, j| if i == j { 0.1 } else { 0.2 });
        assert!((matrix_pdf(&h, &p).unwrap() * vol - 1.0).abs() < 1e-13);
        let far = SymMatrix::from_upper(2, |_, _| 2.0);
        assert_eq!(matrix_pdf(&far, &p).unwrap(), 0.0);
    }

    #[test]
    fn rotation_invariance_is_exact() {
        let p = EnsembleParams::from_lambda(3, 1.3, 0.9).unwrap();
        let h = SymMatrix::from_upper(3, |i, j| 0.3 * (i as f64) - 0.7 * (j as f64) + 0.1);
        let (c, s) = (0.6f64, 0.8f64);
        // permutation composed with a rotation in the (0,1) plane
        let o = [0.0, 0.0, 1.0, c, -s, 0.0, s, c, 0.0];
        let r = h.rotate(&o);
        let a = matrix_pdf(&h, &p).unwrap();
        let b = matrix_pdf(&r, &p).unwrap();
        assert!((a - b).abs() <= 4.0 * f64::EPSILON * a, "{a} vs {b}");
    }

    #[test]
    fn matrix_pdf_gaussian_limit() {
        let alpha = 0.5;
        let h = SymMatrix::from_upper(3, |i, j| 0.1 * (1 + i + j) as f64);
        let goe = matrix_pdf(&h, &EnsembleParams::gaussian(3, alpha).unwrap()).unwrap();
        let mut prev = f64::INFINITY;
        for &lam in &[1e2, 1e4, 1e6] {
            let v = matrix_pdf(&h, &EnsembleParams::from_lambda(3, lam, alpha).unwrap()).unwrap();
            let d = (v / goe - 1.0).abs();
            assert!(d < prev);
            prev = d;
        }
        assert!(prev < 1e-5);
    }

    fn goe_quadrature_inverse(n: usize) -> f64 {
        // 1/K_GOE(1/2) by nested quadrature over ordered levels
        match n {
            2 => {
                let inner = |x: f64| {
                    2.0 * integrate_to_infinity(|d| (-(x * x + (x + d) * (x + d)) / 2.0).exp() * d, 0.0, 1e-16, 1e-12)
                        .unwrap()
                        .value
                };
                gauss_kronrod(inner, -12.0, 12.0, 1e-14, 1e-11).unwrap().value
            }
            3 => {
                let f3 = |x: f64| {
                    gauss_kronrod(
                        |d1: f64| {
                            gauss_kronrod(
                                |d2: f64| {
                                    let y = x + d1;
                                    let z = y + d2;
                                    (-(x * x + y * y + z * z) / 2.0).exp() * d1 * d2 * (d1 + d2)
                                },
                                0.0,
                                14.0,
                                1e-15,
                                1e-10,
                            )
                            .unwrap()
                            .value
                        },
                        0.0,
                        14.0,
                        1e-15,
                        1e-10,
                    )
                    .unwrap()
                    .value
                };
                6.0 * gauss_kronrod(f3, -10.0, 10.0, 1e-13, 1e-9).unwrap().value
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn goe_constant_matches_quadrature() {
        assert!((ln_goe_constant(1, 0.5).exp() - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
        assert!((ln_goe_constant(2, 0.5).exp() - 1.0 / (4.0 * PI.sqrt())).abs() < 1e-15);
        for n in [2, 3] {
            let q = goe_quadrature_inverse(n);
            let c = (-ln_goe_constant(n, 0.5)).exp();
            assert!((q / c - 1.0).abs() < 1e-8, "n={n}: {q} vs {c}");
        }
    }

    /// Two-dimensional normalization over (E1, E2) in rotated coordinates
    /// `s = (E1+E2)/sqrt 2`, `d = (E1-E2)/sqrt 2`.
    fn n2_mass(p: &EnsembleParams) -> f64 {
        let c = std::f64::consts::FRAC_1_SQRT_2;
        let density = |s: f64, d: f64| joint_eigen_density(&[c * (s + d), c * (s - d)], p).unwrap();
        let outer = |s: f64| match p.trace_bound() {
            Some(b) => {
                let top = (b - s * s).max(0.0).sqrt();
                tanh_sinh_with_distances(|d, _, _| density(s, d), 0.0, top, 1e-16, 1e-11).unwrap().value
            }
            None => integrate_to_infinity(|d| density(s, d), 0.0, 1e-16, 1e-11).unwrap().value,
        };
        let half = match p.trace_bound() {
            Some(b) => tanh_sinh_with_distances(|s, _, _| outer(s), 0.0, b.sqrt(), 1e-14, 1e-10).unwrap().value,
            None => integrate_to_infinity(outer, 0.0, 1e-14, 1e-10).unwrap().value,
        };
        4.0 * half
    }

    #[test]
    fn n2_joint_density_normalized() {
        for p in [
            EnsembleParams::from_lambda(2, 0.7, 1.0).unwrap(),
            EnsembleParams::from_lambda(2, 4.0, 0.5).unwrap(),
            EnsembleParams::from_q(2, 0.0, 1.0).unwrap(),
            EnsembleParams::gaussian(2, 2.0).unwrap(),
        ] {
            let m = n2_mass(&p);
            assert!((m - 1.0).abs() < 1e-6, "{:?}: {m}", p.regime());
        }
    }

    #[test]
    fn mixture_forms_agree_with_closed_form() {
        let p = EnsembleParams::from_lambda(2, 1.3, 0.8).unwrap();
        for e in [[0.1, -0.4], [1.5, 0.2], [-3.0, 2.5]] {
            let closed = joint_eigen_density(&e, &p).unwrap();
            let a = joint_eigen_density_mixture(&e, &p, MixtureForm::MatrixExponent).unwrap().value;
            let b = joint_eigen_density_mixture(&e, &p, MixtureForm::RescaledGoe).unwrap().value;
            assert!((a / closed - 1.0).abs() < 1e-8, "{a} vs {closed}");
            assert!((b / closed - 1.0).abs() < 1e-8, "{b} vs {closed}");
        }
    }

    #[test]
    fn permutation_symmetry_and_goe_limit() {
        let p = EnsembleParams::from_lambda(4, 2.2, 0.6).unwrap();
        let e = [0.3, -1.2, 2.0, 0.7];
        let v = joint_eigen_density(&e, &p).unwrap();
        for perm in [[1, 0, 2, 3], [3, 2, 1, 0], [2, 3, 0, 1]] {
            let w: Vec<f64> = perm.iter().map(|&i| e[i]).collect();
            assert_eq!(joint_eigen_density(&w, &p).unwrap(), v);
        }
        let goe = goe_joint_density(&e, 0.6);
        let mut prev = f64::INFINITY;
        for &lam in &[1e2, 1e4, 1e6] {
            let r = joint_eigen_density(&e, &EnsembleParams::from_lambda(4, lam, 0.6).unwrap()).unwrap() / goe;
            assert!((r - 1.0).abs() < prev);
            prev = (r - 1.0).abs();
        }
        assert!(prev < 1e-4);
    }
}
