//! Reproducible random streams.
//!
//! Every trial draws from its own ChaCha20 stream keyed by
//! `SHA-256(master_seed ‖ len(suite_id) ‖ suite_id ‖ trial_index)`, all
//! integers little-endian u64. Streams are therefore independent of the
//! order in which trials run and identical across platforms.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

pub type TrialRng = ChaCha20Rng;

pub fn stream_key(master_seed: u64, suite_id: &str, trial_index: u64) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(master_seed.to_le_bytes());
    h.update((suite_id.len() as u64).to_le_bytes());
    h.update(suite_id.as_bytes());
    h.update(trial_index.to_le_bytes());
    h.finalize().into()
}

pub fn trial_rng(master_seed: u64, suite_id: &str, trial_index: u64) -> TrialRng {
    ChaCha20Rng::from_seed(stream_key(master_seed, suite_id, trial_index))
}

/// Stream for a bare seed, as used by single generator calls.
pub fn seeded_rng(seed: u64) -> TrialRng {
    trial_rng(seed, "", 0)
}
