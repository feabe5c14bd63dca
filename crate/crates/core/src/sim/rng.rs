//! Seeded, platform-independent random streams.
//!
//! Every random decision in a simulation is drawn from a ChaCha8 stream
//! identified by `(seed, stream_id)`. Work items derive their stream id from
//! their coordinates, so results never depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// The generator for `(seed, stream_id)`.
pub fn stream(seed: u64, stream_id: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stream id for a tuple of work-item coordinates.
pub fn stream_id(coords: &[u64]) -> u64 {
    coords.iter().fold(0x51_7cc1_b727_220a, |h, &c| splitmix64(h ^ splitmix64(c)))
}
