use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Address of one independent random stream: ChaCha8 keyed by the master
/// seed, with the stream id selecting one of its 2^64 independent streams.
/// A given `(master_seed, stream_id)` always yields the same sequence, no
/// matter which thread draws it or in what order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        RngStream { master_seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }
}
