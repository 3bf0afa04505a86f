//! Matrix draws for the three regimes.
//!
//! * Gaussian: independent entries, `H_ii ~ N(0, 1/(2 alpha))`,
//!   `H_ij ~ N(0, 1/(4 alpha))`, i.e. density `∝ exp(-alpha tr H^2)`.
//! * Levy branch: `xi ~ Gamma(lambda)`, then a GOE draw at scale
//!   `alpha xi / lambda`. Integrating out `xi` returns the power-law density.
//! * Restricted trace: in the isometric coordinates `x` of
//!   [`SymMatrix::to_f_vector`] the density depends on `|x|` only, with radial
//!   law `r^{f-1} (1 - alpha r^2/|lambda|)^p`, `p = -(lambda + f/2)`. Hence
//!   `u = alpha r^2/|lambda| ~ Beta(f/2, p + 1)` and the direction is uniform.

use rand::Rng;
use serde::Serialize;

use super::scalar::{beta_unchecked, gamma_unchecked, standard_normal};
use super::RngStream;
use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::params::{EnsembleParams, Regime};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixSample {
    pub h: SymMatrix,
    pub params: EnsembleParams,
    /// Mixing variable of the Levy branch; `None` elsewhere.
    pub xi: Option<f64>,
    pub sample_index: u64,
    pub stream: RngStream,
}

fn check_n_alpha(n: usize, alpha: f64) -> Result<()> {
    if n < 1 {
        return Err(crate::error::ParamError::InvalidDimension(n).into());
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(crate::error::ParamError::InvalidAlpha(alpha).into());
    }
    Ok(())
}

fn goe_unchecked<R: Rng + ?Sized>(n: usize, alpha: f64, rng: &mut R) -> SymMatrix {
    let sd_diag = (0.5 / alpha).sqrt();
    let sd_off = (0.25 / alpha).sqrt();
    SymMatrix::from_upper(n, |i, j| standard_normal(rng) * if i == j { sd_diag } else { sd_off })
}

/// GOE draw with density `∝ exp(-alpha tr H^2)`.
pub fn sample_goe<R: Rng + ?Sized>(n: usize, alpha: f64, rng: &mut R) -> Result<SymMatrix> {
    check_n_alpha(n, alpha)?;
    Ok(goe_unchecked(n, alpha, rng))
}

/// Levy-branch draw; returns the matrix and its mixing variable `xi`.
pub fn sample_q_gt1<R: Rng + ?Sized>(params: &EnsembleParams, rng: &mut R) -> Result<(SymMatrix, f64)> {
    if params.regime() != Regime::LevyBranch {
        return Err(Error::WrongRegime { op: "sample_q_gt1", regime: params.regime().name() });
    }
    let lambda = params.lambda();
    loop {
        let xi = gamma_unchecked(lambda, rng);
        // xi underflows to zero only for tiny lambda; redraw rather than divide by zero
        if xi > 0.0 {
            let h = goe_unchecked(params.n(), params.alpha() * xi / lambda, rng);
            return Ok((h, xi));
        }
    }
}

/// Restricted-trace draw, exact via the Beta-radial decomposition.
pub fn sample_q_lt1<R: Rng + ?Sized>(params: &EnsembleParams, rng: &mut R) -> Result<SymMatrix> {
    if params.regime() != Regime::RestrictedTrace {
        return Err(Error::WrongRegime { op: "sample_q_lt1", regime: params.regime().name() });
    }
    let n = params.n();
    let f = params.f();
    let bound = params.trace_bound().expect("restricted trace has a bound");
    let power = params.power();
    loop {
        let mut x: Vec<f64> = (0..f).map(|_| standard_normal(rng)).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let u = beta_unchecked(f as f64 / 2.0, power + 1.0, rng);
        let r = (u * bound).sqrt();
        for v in &mut x {
            *v *= r / norm;
        }
        let h = SymMatrix::from_f_vector(n, &x);
        // rounding can push a draw with u ~ 1 onto the boundary
        if h.trace_sq() < bound {
            return Ok(h);
        }
    }
}

/// Uniform draw on `tr H^2 < f/(2 alpha)`.
pub fn sample_bounded_trace<R: Rng + ?Sized>(n: usize, alpha: f64, rng: &mut R) -> Result<SymMatrix> {
    check_n_alpha(n, alpha)?;
    sample_q_lt1(&EnsembleParams::bounded_trace(n, alpha)?, rng)
}

/// One draw from the regime of `params` on the stream `stream`.
pub fn sample(params: &EnsembleParams, stream: RngStream) -> Result<MatrixSample> {
    let mut rng = stream.rng();
    let (h, xi) = match params.regime() {
        Regime::Gaussian => (sample_goe(params.n(), params.alpha(), &mut rng)?, None),
        Regime::LevyBranch => {
            let (h, xi) = sample_q_gt1(params, &mut rng)?;
            (h, Some(xi))
        }
        Regime::RestrictedTrace => (sample_q_lt1(params, &mut rng)?, None),
    };
    Ok(MatrixSample { h, params: *params, xi, sample_index: stream.stream_id, stream })
}
