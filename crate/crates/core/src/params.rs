//! Parameter algebra of the q-ensemble family.
//!
//! An ensemble is fixed by the matrix size `n`, the entropic index `q` and
//! the confinement scale `alpha`. Everything downstream works with the
//! derived exponent `lambda = 1/(q-1) - f/2`, where `f = n(n+1)/2` counts the
//! independent entries of a real symmetric matrix:
//!
//! | q range            | lambda range       | regime            |
//! |--------------------|--------------------|-------------------|
//! | q < 1              | lambda < -f/2      | restricted trace  |
//! | q = 1              | +inf               | Gaussian (GOE)    |
//! | 1 < q < 1 + 2/f    | 0 < lambda < inf   | Levy branch       |
//!
//! `q = -inf` is accepted and gives the bounded trace ensemble (uniform on
//! the ball `tr H^2 < f/(2 alpha)`).

use serde::{Serialize, Serializer};

use crate::error::ParamError;
use crate::specfun::ln_gamma;

/// Relative slack used when deciding whether a q value sits on `q_max`.
const BOUNDARY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    /// q < 1: density supported on the ball `tr H^2 < -lambda/alpha`.
    RestrictedTrace,
    /// q = 1: the Gaussian orthogonal ensemble.
    Gaussian,
    /// 1 < q < q_max: Gamma mixture of GOEs with power-law tails.
    LevyBranch,
}

impl Regime {
    /// Classifies `(q, f)`. The boundary `q = q_max` and anything above it are
    /// rejected; `q = 1` maps to [`Regime::Gaussian`].
    pub fn classify(q: f64, f: usize) -> Result<Regime, ParamError> {
        if q.is_nan() {
            return Err(ParamError::NotFinite("q"));
        }
        if q == 1.0 {
            return Ok(Regime::Gaussian);
        }
        lambda_from_q(q, f)?;
        Ok(if q < 1.0 { Regime::RestrictedTrace } else { Regime::LevyBranch })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Regime::RestrictedTrace => "restricted-trace",
            Regime::Gaussian => "gaussian",
            Regime::LevyBranch => "levy-branch",
        }
    }
}

/// Tail exponent and coefficient of the small-k characteristic function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailParams {
    pub sigma: f64,
    pub big_lambda: f64,
}

/// Number of independent entries of an `n x n` real symmetric matrix.
pub fn dof(n: usize) -> Result<usize, ParamError> {
    if n < 1 {
        return Err(ParamError::InvalidDimension(n));
    }
    Ok(n * (n + 1) / 2)
}

/// Upper end of the normalizable q range, `1 + 2/f`.
pub fn q_max(f: usize) -> f64 {
    1.0 + 2.0 / f as f64
}

/// `lambda = 1/(q-1) - f/2`.
pub fn lambda_from_q(q: f64, f: usize) -> Result<f64, ParamError> {
    if q.is_nan() || q == f64::INFINITY {
        return Err(ParamError::NotFinite("q"));
    }
    if q == 1.0 {
        return Err(ParamError::GaussianRegime);
    }
    let half_f = f as f64 / 2.0;
    let lambda = 1.0 / (q - 1.0) - half_f;
    if q > 1.0 {
        let qm = q_max(f);
        if lambda.abs() <= BOUNDARY_SLACK * half_f.max(1.0) {
            return Err(ParamError::Boundary { q, q_max: qm });
        }
        if lambda < 0.0 {
            return Err(ParamError::AboveQMax { q, q_max: qm, f });
        }
    }
    Ok(lambda)
}

/// Inverse of [`lambda_from_q`]: `q = 1 + 1/(lambda + f/2)`.
pub fn q_from_lambda(lambda: f64, f: usize) -> f64 {
    1.0 + 1.0 / (lambda + f as f64 / 2.0)
}

/// Small-k law of the element characteristic function on the Levy branch.
///
/// `lambda > 1` gives `sigma = 2, Lambda = 1/(4(lambda-1))`; `0 < lambda < 1`
/// gives `sigma = 2 lambda, Lambda = Gamma(1-lambda)/Gamma(1+lambda)`.
/// `lambda = 1` has no finite coefficient and is reported as
/// [`ParamError::MarginalCase`].
pub fn tail_params(lambda: f64) -> Result<TailParams, ParamError> {
    if !lambda.is_finite() {
        return Err(ParamError::NotFinite("lambda"));
    }
    if lambda <= 0.0 {
        return Err(ParamError::OutOfBranch(lambda));
    }
    if lambda == 1.0 {
        return Err(ParamError::MarginalCase);
    }
    if lambda > 1.0 {
        Ok(TailParams { sigma: 2.0, big_lambda: 1.0 / (4.0 * (lambda - 1.0)) })
    } else {
        Ok(TailParams { sigma: 2.0 * lambda, big_lambda: (ln_gamma(1.0 - lambda) - ln_gamma(1.0 + lambda)).exp() })
    }
}

/// Tail exponent used for the size scaling of alpha. Same as
/// [`tail_params`] except that the marginal `lambda = 1` is assigned `2`.
pub fn scaling_sigma(lambda: f64) -> Result<f64, ParamError> {
    match tail_params(lambda) {
        Ok(t) => Ok(t.sigma),
        Err(ParamError::MarginalCase) => Ok(2.0),
        Err(e) => Err(e),
    }
}

/// `alpha = n^(2/sigma) / 2`, the scaling that keeps spectra of order one
/// as `n` grows.
pub fn alpha_scaling(n: usize, sigma: f64) -> Result<f64, ParamError> {
    if n < 1 {
        return Err(ParamError::InvalidDimension(n));
    }
    if !(sigma > 0.0 && sigma <= 2.0) {
        return Err(ParamError::InvalidSigma(sigma));
    }
    Ok((n as f64).powf(2.0 / sigma) / 2.0)
}

/// Validated parameter bundle with all derived quantities.
///
/// Immutable once built; construct through [`EnsembleParams::from_q`],
/// [`EnsembleParams::from_lambda`], [`EnsembleParams::from_lambda_auto`],
/// [`EnsembleParams::gaussian`] or [`EnsembleParams::bounded_trace`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnsembleParams {
    n: usize,
    f: usize,
    #[serde(serialize_with = "ser_real")]
    q: f64,
    #[serde(serialize_with = "ser_real")]
    lambda: f64,
    alpha: f64,
    mu: f64,
    regime: Regime,
    sigma: f64,
    big_lambda: Option<f64>,
    e_char: Option<f64>,
}

fn ser_real<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

fn check_alpha(alpha: f64) -> Result<(), ParamError> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(ParamError::InvalidAlpha(alpha))
    }
}

impl EnsembleParams {
    /// Builds from the entropic index. `q = 1` yields the Gaussian regime and
    /// `q = -inf` the bounded trace ensemble.
    pub fn from_q(n: usize, q: f64, alpha: f64) -> Result<Self, ParamError> {
        let f = dof(n)?;
        check_alpha(alpha)?;
        let regime = Regime::classify(q, f)?;
        if regime == Regime::Gaussian {
            return Self::gaussian(n, alpha);
        }
        let lambda = lambda_from_q(q, f)?;
        Ok(Self::assemble(n, f, q, lambda, alpha, regime))
    }

    /// Builds a Levy-branch ensemble from `lambda > 0`.
    pub fn from_lambda(n: usize, lambda: f64, alpha: f64) -> Result<Self, ParamError> {
        let f = dof(n)?;
        check_alpha(alpha)?;
        if lambda == f64::INFINITY {
            return Self::gaussian(n, alpha);
        }
        if !lambda.is_finite() {
            return Err(ParamError::NotFinite("lambda"));
        }
        if lambda <= 0.0 {
            return Err(ParamError::OutOfBranch(lambda));
        }
        let q = q_from_lambda(lambda, f);
        Ok(Self::assemble(n, f, q, lambda, alpha, Regime::LevyBranch))
    }

    /// Levy-branch ensemble with `alpha = n^(2/sigma)/2`.
    pub fn from_lambda_auto(n: usize, lambda: f64) -> Result<Self, ParamError> {
        let sigma = scaling_sigma(lambda)?;
        Self::from_lambda(n, lambda, alpha_scaling(n, sigma)?)
    }

    pub fn gaussian(n: usize, alpha: f64) -> Result<Self, ParamError> {
        let f = dof(n)?;
        check_alpha(alpha)?;
        Ok(Self::assemble(n, f, 1.0, f64::INFINITY, alpha, Regime::Gaussian))
    }

    /// The `q -> -inf` limit: uniform density on `tr H^2 < f/(2 alpha)`.
    pub fn bounded_trace(n: usize, alpha: f64) -> Result<Self, ParamError> {
        Self::from_q(n, f64::NEG_INFINITY, alpha)
    }

    fn assemble(n: usize, f: usize, q: f64, lambda: f64, alpha: f64, regime: Regime) -> Self {
        let (sigma, big_lambda, e_char) = match regime {
            Regime::LevyBranch => (
                scaling_sigma(lambda).unwrap_or(2.0),
                tail_params(lambda).ok().map(|t| t.big_lambda),
                Some((n as f64 * lambda / alpha).sqrt()),
            ),
            _ => (2.0, None, None),
        };
        EnsembleParams { n, f, q, lambda, alpha, mu: f as f64 / (2.0 * alpha), regime, sigma, big_lambda, e_char }
    }

    /// Same ensemble with a different confinement scale.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self, ParamError> {
        check_alpha(alpha)?;
        Ok(Self::assemble(self.n, self.f, self.q, self.lambda, alpha, self.regime))
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn f(&self) -> usize {
        self.f
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    /// `+inf` in the Gaussian regime.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    /// Norm target `f/(2 alpha)`; carried as metadata only.
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn regime(&self) -> Regime {
        self.regime
    }
    /// Tail exponent; 2 outside the `0 < lambda < 1` window.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    /// Tail coefficient; `None` off the Levy branch and at `lambda = 1`.
    pub fn big_lambda(&self) -> Option<f64> {
        self.big_lambda
    }
    /// `sqrt(n lambda / alpha)` on the Levy branch.
    pub fn e_char(&self) -> Option<f64> {
        self.e_char
    }

    /// Exponent `1/(1-q)` of the matrix density, written as `-(lambda + f/2)`
    /// so that the bounded trace limit evaluates to exactly zero.
    pub fn power(&self) -> f64 {
        match self.regime {
            Regime::Gaussian => f64::NEG_INFINITY,
            _ => -(self.lambda + self.f as f64 / 2.0),
        }
    }

    /// Squared radius `-lambda/alpha` of the support ball (restricted trace only).
    pub fn trace_bound(&self) -> Option<f64> {
        (self.regime == Regime::RestrictedTrace).then(|| -self.lambda / self.alpha)
    }
}

/// `E_c = sqrt(n lambda / alpha)` for a Levy-branch ensemble.
pub fn characteristic_energy(params: &EnsembleParams) -> Result<f64, ParamError> {
    params.e_char().ok_or(ParamError::OutOfBranch(params.lambda()))
}
