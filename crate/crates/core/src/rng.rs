//! Per-replicate random streams.
//!
//! Every replicate gets its own ChaCha8 stream selected by `(seed, domain, index)`,
//! so results never depend on the order in which replicates are evaluated.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) type StreamRng = ChaCha8Rng;

/// Distinguishes independent uses of one master seed.
#[derive(Debug, Clone, Copy)]
#[repr(u64)]
pub(crate) enum Domain {
    Bootstrap = 0,
    MonteCarlo = 1,
    Curve = 2,
    CompareFirst = 3,
    CompareSecond = 4,
}

pub(crate) fn stream(seed: u64, domain: Domain, index: u64) -> StreamRng {
    let key = seed ^ (domain as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(index);
    rng
}
