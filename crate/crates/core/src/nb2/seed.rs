//! Stateless seed derivation for bootstrap repetitions.
//!
//! Repetition `m` of a run with master seed `s` draws from a ChaCha8 stream
//! seeded with `splitmix64(splitmix64(s) ^ (m * 0xD1B54A32D192ED03))`. The
//! seed depends only on `(s, m)`, never on which worker runs the repetition.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Tag recorded with every result so the derivation can be audited.
pub const SEED_DERIVATION: &str = "splitmix64(splitmix64(master)^(rep*0xD1B54A32D192ED03))->chacha8";

const REP_MULTIPLIER: u64 = 0xD1B5_4A32_D192_ED03;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn repetition_seed(master_seed: u64, repetition: u64) -> u64 {
    splitmix64(splitmix64(master_seed) ^ repetition.wrapping_mul(REP_MULTIPLIER))
}

pub fn repetition_rng(master_seed: u64, repetition: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(repetition_seed(master_seed, repetition))
}
