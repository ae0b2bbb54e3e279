//! Deterministic, addressable random streams.
//!
//! Every stochastic component draws from a stream addressed by
//! `(seed, class, key)`, where `class` names the entity class and `key`
//! the individual entity. Streams are independent of each other and of
//! iteration order, so adding entities or reordering work never perturbs
//! the draws of existing entities, and parallel evaluation is
//! bit-reproducible.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(hash: u64, bytes: &[u8]) -> u64 {
    let mut h = hash;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

/// Final avalanche from SplitMix64; decouples nearby hash inputs.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable 64-bit stream address for `(seed, class, key)`.
pub fn stream_seed(seed: u64, class: &str, key: &str) -> u64 {
    let mut h = fnv1a(FNV_OFFSET, &seed.to_le_bytes());
    h = fnv1a(h, class.as_bytes());
    h = fnv1a(h, &[0x1f]); // separator so ("ab","c") != ("a","bc")
    h = fnv1a(h, key.as_bytes());
    mix(h)
}

/// Deterministic generator for the stream `(seed, class, key)`.
pub fn substream(seed: u64, class: &str, key: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(seed, class, key))
}

/// Derived seed for the i-th replication of a seeded experiment.
pub fn replication_seed(seed: u64, index: u64) -> u64 {
    stream_seed(seed, "replication", &index.to_string())
}
