//! Splittable seeding: every randomized step draws from its own ChaCha stream
//! derived from the run seed, a label and an index, so results do not depend
//! on how many numbers other steps consumed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic child seed for `(label, index)` under `seed`.
pub fn sub_seed(seed: u64, label: &str, index: u64) -> u64 {
    // FNV-1a over the label keeps sub-streams independent of label length
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    splitmix64(splitmix64(seed ^ h).wrapping_add(index))
}

/// Generator for one labelled step; the derived seed is logged at debug level.
pub fn stream(seed: u64, label: &str, index: u64) -> Rng {
    let s = sub_seed(seed, label, index);
    log::debug!("rng {label}[{index}] seed={s:#018x}");
    ChaCha8Rng::seed_from_u64(s)
}
