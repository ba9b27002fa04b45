//! Seeded, splittable randomness. One seed drives everything; independent
//! consumers draw from distinct ChaCha streams of it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SERIES_STREAM: u64 = 0;
pub const QUERY_STREAM: u64 = 1;
pub const NOISE_STREAM: u64 = 2;

/// Stream used by fragment worker `k` to pick its starting subsequence.
pub fn worker_stream(k: usize) -> u64 {
    16 + k as u64
}

pub fn generator(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
