//! Seed-derived random streams.
//!
//! Every independent piece of randomness in a run (a device deployment, a
//! beacon orientation, the fading of one link) gets its own ChaCha stream
//! whose seed is a hash of the scenario seed and a tuple of indices. Adding
//! devices or beacons therefore never shifts the draws of existing ones, and
//! the result does not depend on the order work units are scheduled in.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Purpose tags keep streams for different uses disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Deployment = 1,
    Orientation = 2,
    Placement = 3,
    Fading = 4,
    Heatmap = 5,
}

// splitmix64 finalizer
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hash of a seed and an index path.
pub fn derive_seed(seed: u64, purpose: Purpose, indices: &[u64]) -> u64 {
    let mut h = mix(seed ^ mix(purpose as u64));
    for &i in indices {
        h = mix(h ^ mix(i.wrapping_add(0x632B_E59B_D9B4_E019)));
    }
    h
}

pub fn stream(seed: u64, purpose: Purpose, indices: &[u64]) -> SimRng {
    SimRng::seed_from_u64(derive_seed(seed, purpose, indices))
}
