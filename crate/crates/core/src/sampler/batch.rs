use rayon::prelude::*;

use super::{sample, MatrixSample, RngStream};
use crate::error::Result;
use crate::params::EnsembleParams;

/// Draws samples `0..count` on the current rayon pool. Sample `k` always
/// uses stream `(master_seed, k)`, so the result does not depend on the
/// number of worker threads.
pub fn sample_batch(params: &EnsembleParams, master_seed: u64, count: usize) -> Result<Vec<MatrixSample>> {
    map_batch(params, master_seed, count, Ok)
}

/// Like [`sample_batch`] but reduces each draw with `f` before collecting,
/// so large batches never hold every matrix at once. Output is in sample
/// order.
pub fn map_batch<T, F>(params: &EnsembleParams, master_seed: u64, count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(MatrixSample) -> Result<T> + Sync + Send,
{
    (0..count as u64).into_par_iter().map(|k| sample(params, RngStream::new(master_seed, k)).and_then(&f)).collect()
}
