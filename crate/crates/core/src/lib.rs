//! Reversible maps as compositions of two involutions.
//!
//! The crate covers the random-involution model of a reversible map
//! `L = H∘G` on `N` points, where `G` fixes `g` points and `H` fixes `h`:
//!
//! * [`model`]: involutions, permutations and symmetry-classified cycles;
//! * [`sampler`]: uniform sampling and exhaustive enumeration of `E(g, h, N)`;
//! * [`theory`]: exact finite-N expectations and the limiting laws;
//! * [`stats`]: seeded parallel Monte Carlo and empirical estimators;
//! * [`ffield`], [`maps`], [`polyroots`]: concrete reversible maps over
//!   `F_p` (Hénon and a 3D rational map) and root counting mod `p`.

pub mod error;
pub mod ffield;
pub mod maps;
pub mod model;
pub mod polyroots;
pub mod sampler;
pub mod stats;
pub mod theory;

pub use error::{Error, Result};
pub use ffield::{FieldElement, PrimeField};
pub use maps::{FixedSets, MapKind, ReversiblePair};
pub use model::{compose, decompose, fraction_in_period, Cycle, CycleDecomposition, Involution, Permutation, SymmetryClass};
pub use polyroots::PrimePoly;
pub use sampler::{count_pairs, enumerate_pairs, sample_involution, PairSpace};
pub use stats::{EmpiricalDistribution, RepetitionHistogram, TrialResult};
pub use theory::{Line, RepetitionParams, TheoryParams};

/// Environment variable overriding [`DEFAULT_CAP_POINTS`].
pub const CAP_POINTS_ENV: &str = "REVMAP_CAP_POINTS";

/// Default largest phase space for which a dense permutation is built.
pub const DEFAULT_CAP_POINTS: u64 = 20_000_000;

/// [`DEFAULT_CAP_POINTS`], or the value of `REVMAP_CAP_POINTS` when set and valid.
pub fn cap_points() -> u64 {
    std::env::var(CAP_POINTS_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_CAP_POINTS)
}
