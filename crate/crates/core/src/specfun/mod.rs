//! Special functions and quadrature.

mod bessel;
mod erf;
mod gamma;
mod kummer;
mod levy;
pub mod quad;

pub use bessel::{bessel_k, ln_bessel_k};
pub use erf::{erf, erfc};
pub use gamma::{gamma, ln_beta, ln_gamma, reg_inc_beta};
pub use kummer::{kummer_m, kummer_m_power_scaled, kummer_m_route, kummer_m_via, KummerRoute};
pub use levy::levy_density;
pub use quad::QuadratureResult;
