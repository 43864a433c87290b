//! Counter-based seed derivation.
//!
//! Trial `i` of an experiment with base seed `s` draws from streams keyed by
//! `(s, i, stream)`, so trials can run in any order or on any thread and
//! still reproduce bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives an independent 64-bit seed for `(base, index, stream)`.
pub fn derive(base: u64, index: u64, stream: u64) -> u64 {
    let a = splitmix64(base ^ 0x6a09_e667_f3bc_c909);
    let b = splitmix64(a ^ index.wrapping_mul(0xd6e8_feb8_6659_fd93));
    splitmix64(b ^ stream.wrapping_mul(0xa076_1d64_78bd_642f))
}

pub fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}
