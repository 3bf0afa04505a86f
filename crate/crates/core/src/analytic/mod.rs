//! Closed-form and quadrature evaluators for the ensemble's laws.

pub mod curve;
pub mod density;
pub mod element;
pub mod ensemble;
pub mod gap;

pub use curve::{gap_curve, AnalyticCurve, CurveKind};
pub use density::{
    goe_counting, integrated_density, level_density, level_density_mixture, level_density_quadrature,
    semicircle_density, xi_max,
};
pub use element::{
    element_cdf, element_char_fn, element_char_fn_small_k, element_correlation, element_pdf, limiting_element_pdf,
    ElementKind,
};
pub use ensemble::{
    goe_joint_density, joint_eigen_density, joint_eigen_density_mixture, ln_goe_constant, ln_joint_constant,
    ln_matrix_pdf_of_trace_sq, log_partition, matrix_pdf, MixtureForm,
};
pub use gap::{
    gap_asymptote, gap_probability, gap_probability_estimate, gap_probability_substituted, goe_gap_probability,
};
