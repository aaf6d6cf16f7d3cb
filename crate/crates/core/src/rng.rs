//! Deterministic pseudo-randomness for splits, fold assignment, and seed
//! derivation.
//!
//! Every random decision in this crate flows through [`SplitMix64`] so that a
//! run is a pure function of its seeds and can be reproduced bit-identically
//! by any implementation, in any language, from this description:
//!
//! * State advances by the 64-bit golden-ratio constant
//!   `0x9E3779B97F4A7C15` (wrapping), and each output is the advanced state
//!   passed through the SplitMix64 finalizer:
//!   `z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
//!   z *= 0x94D049BB133111EB; z ^= z >> 31` (wrapping multiplies).
//! * Bounded sampling uses the multiply-shift reduction
//!   `(next() as u128 * m as u128) >> 64`. The modulo bias is below
//!   `m / 2^64`, irrelevant at the sizes used here, and the method needs no
//!   rejection loop, which keeps cross-implementation parity trivial.
//! * Shuffling is a Fisher-Yates pass from the top:
//!   `for i in (1..n).rev() { swap(a[i], a[bounded(i + 1)]) }`.
//!
//! Per-iteration seeds for the experiment protocol are successive outputs of
//! a `SplitMix64` seeded with the master seed (see the harness module), and
//! are generated up front so parallel and serial execution agree.

/// SplitMix64 generator (Steele, Lea & Flood's finalizer).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw from `0..m` by multiply-shift reduction. `m` must be > 0.
    pub fn bounded(&mut self, m: u64) -> u64 {
        debug_assert!(m > 0);
        ((self.next_u64() as u128 * m as u128) >> 64) as u64
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.bounded(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

/// A shuffled `0..n` index permutation.
pub fn permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut indices: Vec<usize> = (0..n).collect();
    SplitMix64::new(seed).shuffle(&mut indices);
    indices
}
