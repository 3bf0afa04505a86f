use thiserror::Error;

/// Errors raised while building or validating ensemble parameters.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("invalid dimension n={0}: need n >= 1")]
    InvalidDimension(usize),
    #[error("q=1 is the Gaussian regime; route to the GOE evaluators")]
    GaussianRegime,
    #[error("q={q} sits on the boundary q_max={q_max} (lambda=0), the ensemble is not normalizable")]
    Boundary { q: f64, q_max: f64 },
    #[error("q={q} exceeds q_max={q_max} for f={f}; the partition function diverges")]
    AboveQMax { q: f64, q_max: f64, f: usize },
    #[error("lambda={0} is outside the Levy branch (need lambda > 0)")]
    OutOfBranch(f64),
    #[error("lambda=1 is the marginal case: tail exponent sigma=2 but no finite tail coefficient")]
    MarginalCase,
    #[error("alpha={0} must be finite and positive")]
    InvalidAlpha(f64),
    #[error("tail exponent sigma={0} must lie in (0, 2]")]
    InvalidSigma(f64),
    #[error("{0} is not a finite number")]
    NotFinite(&'static str),
}

/// Errors from the special-function and quadrature layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("{func}: argument outside the domain ({detail})")]
    Domain { func: &'static str, detail: String },
    #[error("{func}: no convergence after {iterations} iterations")]
    NoConvergence { func: &'static str, iterations: usize },
    #[error("quadrature did not reach tolerance: value {value}, error estimate {error}")]
    Quadrature { value: f64, error: f64 },
}

/// Top-level error for the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("operation `{op}` is not defined for the {regime} regime")]
    WrongRegime { op: &'static str, regime: &'static str },
    #[error("moments diverge for lambda={lambda} (need lambda > 2): matrix elements are strongly correlated")]
    MomentDivergence { lambda: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
