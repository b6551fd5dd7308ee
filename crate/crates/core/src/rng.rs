//! Deterministic random substreams.
//!
//! Every stochastic routine takes a master seed plus a path of integer tags
//! (replicate index, model id, bootstrap draw, ...) and derives its own
//! ChaCha stream from them. Streams never depend on execution order, so
//! parallel runs reproduce sequential ones exactly.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a seed and a tag path into a single 64-bit key.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    let mut state = master;
    let mut key = splitmix64(&mut state);
    for &t in tags {
        state ^= t.wrapping_mul(0xD6E8_FEB8_6659_FD93) ^ key;
        key = splitmix64(&mut state);
    }
    key
}

/// Generator for the stream identified by `(master, tags)`.
pub fn substream(master: u64, tags: &[u64]) -> StreamRng {
    let mut state = derive_seed(master, tags);
    let mut seed = [0u8; 32];
    for chunk in seed.chunks_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}
