//! Seed derivation. Every pseudo-random choice in the crate is a function of
//! an explicit seed and a domain tag, so worlds and reports are reproducible
//! across runs and platforms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Hashes `(tag, seed, parts...)` into a 64-bit sub-seed.
pub fn derive_seed(tag: &str, seed: u64, parts: &[&[u8]]) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update((tag.len() as u64).to_le_bytes());
    hasher.update(tag.as_bytes());
    hasher.update(seed.to_le_bytes());
    for part in parts {
        hasher.update((part.len() as u64).to_le_bytes());
        hasher.update(part);
    }
    let digest = hasher.finalize();
    let mut head = [0u8; 8];
    head.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(head)
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn derived_rng(tag: &str, seed: u64, parts: &[&[u8]]) -> ChaCha8Rng {
    seeded_rng(derive_seed(tag, seed, parts))
}
