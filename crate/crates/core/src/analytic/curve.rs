use rayon::prelude::*;
use serde::Serialize;

use super::density::{integrated_density, level_density, level_density_quadrature, semicircle_density};
use super::element::{element_char_fn, element_pdf, ElementKind};
use super::gap::gap_probability_estimate;
use crate::error::{Error, Result};
use crate::params::EnsembleParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    ElementPdf,
    LevelDensity,
    GapProbability,
    CharFn,
    Semicircle,
}

impl CurveKind {
    pub fn name(self) -> &'static str {
        match self {
            CurveKind::ElementPdf => "element_pdf",
            CurveKind::LevelDensity => "level_density",
            CurveKind::GapProbability => "gap_probability",
            CurveKind::CharFn => "char_fn",
            CurveKind::Semicircle => "semicircle",
        }
    }
}

/// A tabulated law. `errors[i]` bounds the numerical error of `values[i]`
/// (zero for closed forms); `quadrature_error` is their maximum.
#[derive(Debug, Clone, Serialize)]
pub struct AnalyticCurve {
    pub kind: CurveKind,
    pub params: EnsembleParams,
    pub abscissae: Vec<f64>,
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub quadrature_error: f64,
}

impl AnalyticCurve {
    fn assemble(kind: CurveKind, params: &EnsembleParams, points: Vec<(f64, f64, f64)>) -> Self {
        let quadrature_error = points.iter().map(|p| p.2).fold(0.0, f64::max);
        let (mut abscissae, mut values, mut errors) = (Vec::new(), Vec::new(), Vec::new());
        for (x, y, e) in points {
            abscissae.push(x);
            values.push(y);
            errors.push(e);
        }
        AnalyticCurve { kind, params: *params, abscissae, values, errors, quadrature_error }
    }

    fn tabulate(
        kind: CurveKind,
        params: &EnsembleParams,
        grid: &[f64],
        eval: impl Fn(f64) -> Result<(f64, f64, f64)> + Sync,
    ) -> Result<Self> {
        let points = grid.par_iter().map(|&x| eval(x)).collect::<Result<Vec<_>>>()?;
        Ok(Self::assemble(kind, params, points))
    }

    pub fn element_pdf(params: &EnsembleParams, grid: &[f64], which: ElementKind) -> Result<Self> {
        Self::tabulate(CurveKind::ElementPdf, params, grid, |x| Ok((x, element_pdf(x, params, which), 0.0)))
    }

    pub fn char_fn(params: &EnsembleParams, grid: &[f64], which: ElementKind) -> Result<Self> {
        Self::tabulate(CurveKind::CharFn, params, grid, |k| Ok((k, element_char_fn(k, params, which)?, 0.0)))
    }

    /// Closed-form level density; the error column is its distance to the
    /// independent `xi`-quadrature.
    pub fn level_density(params: &EnsembleParams, grid: &[f64]) -> Result<Self> {
        Self::tabulate(CurveKind::LevelDensity, params, grid, |e| {
            let v = level_density(e, params)?;
            let err = match level_density_quadrature(e, params) {
                Ok(q) => (q.value - v).abs().max(q.abs_error_estimate),
                Err(Error::WrongRegime { .. }) => 0.0,
                Err(other) => return Err(other),
            };
            Ok((e, v, err))
        })
    }

    /// Semicircle at `params.alpha()`.
    pub fn semicircle(params: &EnsembleParams, grid: &[f64]) -> Result<Self> {
        Self::tabulate(CurveKind::Semicircle, params, grid, |e| {
            Ok((e, semicircle_density(e, params.n(), params.alpha()), 0.0))
        })
    }

    /// Gap probability in parametric form: abscissae are `s(theta)`, values
    /// `E(theta)`, over the given half-widths.
    pub fn gap(params: &EnsembleParams, theta_grid: &[f64]) -> Result<Self> {
        Self::tabulate(CurveKind::GapProbability, params, theta_grid, |theta| {
            let s = integrated_density(theta, params)?;
            let e = gap_probability_estimate(theta, params)?;
            Ok((s.value, e.value, e.abs_error_estimate))
        })
    }
}

/// [`AnalyticCurve::gap`].
pub fn gap_curve(params: &EnsembleParams, theta_grid: &[f64]) -> Result<AnalyticCurve> {
    AnalyticCurve::gap(params, theta_grid)
}
