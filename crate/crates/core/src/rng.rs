//! Portable deterministic generator for sampling and splitting.
//!
//! A 64-bit linear congruential generator with Knuth's MMIX constants:
//!
//! ```text
//! state <- state * 6364136223846793005 + 1442695040888963407   (mod 2^64)
//! ```
//!
//! The initial state is the seed itself and the generator is advanced before
//! each output, so the first output is `seed * a + c`. Bounded draws use the
//! high 32 bits: `below(n) = ((state >> 32) * n) >> 32` for `n <= 2^32`.
//! Shuffles are Fisher–Yates from the last index down, drawing
//! `below(i + 1)` for position `i`. Any implementation following these three
//! rules reproduces the same selections.

pub const MULTIPLIER: u64 = 6364136223846793005;
pub const INCREMENT: u64 = 1442695040888963407;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(MULTIPLIER).wrapping_add(INCREMENT);
        self.state
    }

    /// Uniform integer in `0..bound`. `bound` must be in `1..=2^32`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0 && bound <= 1 << 32, "bound out of range: {bound}");
        ((self.next_u64() >> 32) * bound) >> 32
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}
