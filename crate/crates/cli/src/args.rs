use std::str::FromStr;

use clap::Args;
use qrmt::params::alpha_scaling;
use qrmt::EnsembleParams;

use crate::error::{CliError, CliResult};

/// `--alpha` is a positive number or `auto` (`N^{2/sigma}/2`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaArg {
    Auto,
    Value(f64),
}

impl FromStr for AlphaArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(AlphaArg::Auto);
        }
        s.parse::<f64>().map(AlphaArg::Value).map_err(|_| format!("expected a number or `auto`, got `{s}`"))
    }
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Matrix dimension.
    #[arg(long)]
    pub n: usize,
    /// Entropic index; `1` is the GOE, `-inf` the bounded trace ensemble.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "lambda", required_unless_present = "lambda")]
    pub q: Option<f64>,
    /// Tail parameter of the Levy branch (`lambda > 0`, `inf` for the GOE).
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Confinement strength, or `auto`.
    #[arg(long, default_value = "auto", allow_hyphen_values = true)]
    pub alpha: AlphaArg,
}

impl ParamArgs {
    pub fn build(&self) -> CliResult<EnsembleParams> {
        let provisional = match (self.q, self.lambda) {
            (Some(q), None) => EnsembleParams::from_q(self.n, q, 1.0)?,
            (None, Some(l)) => EnsembleParams::from_lambda(self.n, l, 1.0)?,
            _ => return Err(CliError::Param("give exactly one of --q and --lambda".into())),
        };
        let alpha = match self.alpha {
            AlphaArg::Value(a) => a,
            AlphaArg::Auto => alpha_scaling(self.n, provisional.sigma())?,
        };
        Ok(provisional.with_alpha(alpha)?)
    }
}
