//! Named random streams derived from a single seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// FNV-1a; stable across platforms and compiler versions.
fn stream_id(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Generator for the consumer `name`; new names never perturb existing streams.
pub fn stream(seed: u64, name: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id(name));
    rng
}
