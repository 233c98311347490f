//! Labeled deterministic random substreams derived from one master seed.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

pub type ProtocolRng = ChaCha20Rng;

/// Independent stream for `label` under `seed`.
pub fn substream(seed: u64, label: &str) -> ProtocolRng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update((label.len() as u64).to_le_bytes());
    h.update(label.as_bytes());
    ProtocolRng::from_seed(h.finalize().into())
}
