//! From matrices to spectra and their statistics.

pub mod batch;
pub mod eigen;
pub mod histogram;
pub mod stats;

pub use batch::{
    empirical_density, empirical_gap, nn_spacing, nn_spacings, wigner_surmise_cdf, wigner_surmise_pdf, GapPoint,
    SpacingScale, SpectrumBatch,
};
pub use eigen::{eigenvalues, symmetric_eigen, Eigen};
pub use histogram::{BinSpec, Histogram, Normalization};
pub use stats::{default_hill_k, ks_distance, ks_two_sample, loglog_slope, tail_index, TailIndex};
