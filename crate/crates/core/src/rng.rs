//! Seed derivation. Every random stream in the crate is a ChaCha8 generator
//! seeded from a master seed mixed with a path of integer tags, so a stream
//! only depends on *what* it is for, never on when or where it runs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type EaRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes `tags` into `master` one at a time.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    tags.iter()
        .fold(splitmix64(master), |acc, &t| splitmix64(acc ^ splitmix64(t)))
}

pub fn rng_from_seed(seed: u64) -> EaRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn derived_rng(master: u64, tags: &[u64]) -> EaRng {
    rng_from_seed(derive_seed(master, tags))
}
