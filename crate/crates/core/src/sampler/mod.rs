//! Exact samplers for every regime, plus the scalar variates they use.

mod batch;
mod ensemble;
mod rng;
mod scalar;

pub use batch::{map_batch, sample_batch};
pub use ensemble::{sample, sample_bounded_trace, sample_goe, sample_q_gt1, sample_q_lt1, MatrixSample};
pub use rng::RngStream;
pub use scalar::{sample_beta, sample_gamma, sample_gaussian, sample_levy_stable, sample_student_t, standard_normal};
