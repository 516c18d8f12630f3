//! Counter-based derivation of independent random streams.
//!
//! Every draw and every simulation run gets its own ChaCha stream keyed by
//! the master seed and its position, so results do not depend on worker
//! count or scheduling order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a stream from the master seed and a path of counters
/// (e.g. `[domain, draw, sim]`).
pub fn derive_stream(master_seed: u64, path: &[u64]) -> ChaCha8Rng {
    let mut state = master_seed;
    for &p in path {
        let mixed = splitmix64(&mut state) ^ p.wrapping_mul(0xD1B5_4A32_D192_ED03);
        state ^= mixed.rotate_left(17);
    }
    let mut seed = [0u8; 32];
    for chunk in seed.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}
