//! Seeded, splittable randomness.
//!
//! Every Monte Carlo entry point takes a master seed and derives one ChaCha
//! stream per logical unit of work (session, trial, candidate sweep). Work
//! can then be partitioned across threads in any order and still reproduce
//! bit-identical aggregates.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// RNG for stream `stream` of master seed `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
