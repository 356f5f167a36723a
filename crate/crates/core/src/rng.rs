//! Counter-based seeding: every consumer of randomness gets its own ChaCha
//! stream derived from `(seed, stream)`, so any draw can be reproduced in
//! isolation regardless of evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn substream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Packs two counters into one stream id.
pub fn stream_id(hi: u64, lo: u64) -> u64 {
    (hi << 32) ^ (lo & 0xffff_ffff)
}
