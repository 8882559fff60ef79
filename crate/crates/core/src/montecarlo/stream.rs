//! Per-trial random streams.
//!
//! Every trial draws from its own ChaCha8 stream keyed by the master seed,
//! with the stream id packing `(k, trial_index)`. Outcomes therefore depend
//! only on `(master_seed, k, trial_index)` and never on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TrialRng = ChaCha8Rng;

/// Largest trial index and largest `k` representable in a stream id.
pub const MAX_STREAM_FIELD: u64 = u32::MAX as u64;

pub fn trial_stream(master_seed: u64, k: u64, trial: u64) -> TrialRng {
    assert!(k <= MAX_STREAM_FIELD && trial <= MAX_STREAM_FIELD, "stream id overflow");
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(k << 32 | trial);
    rng
}
