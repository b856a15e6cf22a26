//! Seeded random source shared by excerpt sampling and dataset splitting.
//!
//! The stream is ChaCha8 keyed with the seed as eight little-endian bytes
//! followed by 24 zero bytes. Uniform integers below `n` use rejection
//! sampling on 64-bit outputs: draws at or above `n * floor(2^64 / n)` are
//! discarded, the rest are reduced modulo `n`. Both steps are fixed so runs
//! reproduce exactly across platforms and releases.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct SeededRng(ChaCha8Rng);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        SeededRng(ChaCha8Rng::from_seed(key))
    }

    /// Uniform integer in `0..n`. Panics when `n == 0`.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "empty range");
        let n = n as u64;
        let limit = n * (u64::MAX / n);
        loop {
            let x = self.0.next_u64();
            if x < limit {
                return (x % n) as usize;
            }
        }
    }

    /// Fisher-Yates shuffle, walking from the last element down.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}
