//! Random streams.
//!
//! Every stochastic component draws from a ChaCha8 stream keyed by a 64-bit
//! seed. ChaCha is a counter-based generator, so a stream is a pure
//! function of its seed and the draw sequence is identical on every
//! platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

pub fn stream(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}
