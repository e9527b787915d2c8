//! Fixtures shared by the criterion benchmarks.

use revmap_core::sampler::trial_rng;
use revmap_core::{sampler, Involution, PrimeField};

/// A seeded random pair on `n` points with the given fixed-point counts.
pub fn random_pair(n: usize, g: usize, h: usize, seed: u64) -> (Involution, Involution) {
    let mut rng = trial_rng(seed, 0);
    sampler::sample_pair_with(n, g, h, &mut rng).expect("admissible fixture")
}

pub fn field(p: u64) -> PrimeField {
    PrimeField::new(p).expect("fixture modulus is prime")
}
