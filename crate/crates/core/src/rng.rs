//! Counter-based random streams.
//!
//! Every replication draws from its own ChaCha8 stream keyed by
//! `(seed, lane)` with the replication index as the stream id, so results do
//! not depend on how replications are spread across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Right-hand (t ≥ 0) Brownian increments, and the normals fed to Cholesky.
pub const LANE_MAIN: u64 = 0;
/// Left-hand (t < 0) Brownian increments.
pub const LANE_LEFT: u64 = 1;
/// Brownian-bridge fills for off-grid window endpoints; one lane per offset.
pub const LANE_BRIDGE: u64 = 2;
/// Dyadic midpoints used by the ruin simulator's adaptive refinement.
pub const LANE_MIDPOINT: u64 = 1 << 32;

pub fn stream(seed: u64, lane: u64, replication: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&lane.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(replication);
    rng
}

/// Standard normal attached to `index` within a replication's midpoint
/// stream, computable in any order (Box–Muller on two keyed words).
pub fn keyed_normal(rng: &mut ChaCha8Rng, index: u64) -> f64 {
    use rand::RngCore;
    rng.set_word_pos(u128::from(index) * 4);
    let a = rng.next_u64();
    let b = rng.next_u64();
    // (0, 1] and [0, 1) from the top 53 bits
    let u1 = ((a >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
    let u2 = (b >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
