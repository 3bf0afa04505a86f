#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::excessive_precision,
    clippy::needless_range_loop,
    clippy::manual_memcpy
)]

pub mod analytic;
pub mod error;
pub mod matrix;
pub mod params;
pub mod reproduce;
pub mod sampler;
pub mod specfun;
pub mod spectral;

pub use error::{Error, NumericError, ParamError, Result};
pub use matrix::SymMatrix;
pub use params::{EnsembleParams, Regime, TailParams};
