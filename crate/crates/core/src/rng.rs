//! Seeded random streams.
//!
//! One master seed drives everything; independent sub-tasks (samples,
//! retries, workers) draw from their own ChaCha stream so results do not
//! depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn stream(seed: u64, index: u64) -> Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

/// A derived 64-bit seed, used when a seed has to be echoed in a report.
pub fn derive(seed: u64, index: u64) -> u64 {
    use rand::RngCore;
    stream(seed, index).next_u64()
}
