use thiserror::Error;

/// Errors raised by the model, the samplers and the finite-field maps.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size mismatch: {left} vs {right} points")]
    SizeMismatch { left: usize, right: usize },

    #[error("parity violation: N={n}, g={g}, h={h} (N-g and N-h must be even, 0 <= g,h <= N)")]
    Parity { n: u64, g: u64, h: u64 },

    #[error("not an involution: point {point} maps to {image}, which maps to {back}")]
    NotInvolution { point: usize, image: usize, back: usize },

    #[error("not a permutation: {0}")]
    NotPermutation(String),

    #[error("permutation is not the composition H∘G at point {point}")]
    InconsistentComposition { point: usize },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("modulus {0} out of range (odd primes below 2^31)")]
    ModulusRange(u64),

    #[error("p = {0} is not 3 mod 4; the 3D map's denominator 1+(1-y)^2 can vanish")]
    NotThreeModFour(u64),

    #[error("field mismatch: F_{left} vs F_{right}")]
    FieldMismatch { left: u64, right: u64 },

    #[error("division by zero in F_{0}")]
    DivisionByZero(u64),

    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,

    #[error("{what}: requested {requested}, cap is {cap}")]
    ResourceCap { what: &'static str, requested: u128, cap: u128 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
