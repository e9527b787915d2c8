//! Involutions, permutations and symmetry-classified cycle decompositions
//! of a finite set `Ω = {0, …, N-1}`.
//!
//! A reversible permutation is written `L = H∘G` with `G`, `H` involutions.
//! Every cycle of `L` is either *symmetric* (mapped onto itself by `G`) or
//! *asymmetric* (exchanged by `G` with another cycle of the same length).
//! Symmetric cycles are recognised by how many points of `Fix G` and
//! `Fix H` they contain.

use num_rational::BigRational;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A self-inverse permutation with a cached fixed-point count.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Involution {
    pairing: Vec<u32>,
    fixed_count: usize,
}

impl Involution {
    /// Validates `pairing` and counts its fixed points.
    pub fn new(pairing: Vec<u32>) -> Result<Self> {
        let n = pairing.len();
        check_len(n)?;
        let mut fixed_count = 0;
        for (i, &j) in pairing.iter().enumerate() {
            let j = j as usize;
            if j >= n {
                return Err(Error::NotPermutation(format!("image {j} of {i} outside 0..{n}")));
            }
            let back = pairing[j] as usize;
            if back != i {
                return Err(Error::NotInvolution { point: i, image: j, back });
            }
            if j == i {
                fixed_count += 1;
            }
        }
        Ok(Involution { pairing, fixed_count })
    }

    /// Builds an involution from a list of fixed points and a list of 2-cycles.
    pub fn from_cycles(n: usize, swaps: &[(u32, u32)]) -> Result<Self> {
        let mut pairing: Vec<u32> = (0..n as u32).collect();
        let mut touched = vec![false; n];
        for &(a, b) in swaps {
            let (ai, bi) = (a as usize, b as usize);
            if ai >= n || bi >= n || ai == bi || touched[ai] || touched[bi] {
                return Err(Error::InvalidArgument(format!("bad swap ({a} {b}) on {n} points")));
            }
            touched[ai] = true;
            touched[bi] = true;
            pairing[ai] = b;
            pairing[bi] = a;
        }
        Involution::new(pairing)
    }

    pub fn identity(n: usize) -> Self {
        Involution { pairing: (0..n as u32).collect(), fixed_count: n }
    }

    pub(crate) fn from_raw_unchecked(pairing: Vec<u32>, fixed_count: usize) -> Self {
        debug_assert!(Involution::new(pairing.clone()).map(|i| i.fixed_count) == Ok(fixed_count));
        Involution { pairing, fixed_count }
    }

    pub fn n(&self) -> usize {
        self.pairing.len()
    }

    pub fn pairing(&self) -> &[u32] {
        &self.pairing
    }

    /// Number of fixed points (`g` for `G`, `h` for `H`).
    pub fn fixed_count(&self) -> usize {
        self.fixed_count
    }

    #[inline]
    pub fn apply(&self, i: u32) -> u32 {
        self.pairing[i as usize]
    }

    #[inline]
    pub fn is_fixed(&self, i: u32) -> bool {
        self.pairing[i as usize] == i
    }

    pub fn fixed_points(&self) -> impl Iterator<Item = u32> + '_ {
        self.pairing.iter().enumerate().filter(|(i, &j)| *i as u32 == j).map(|(i, _)| i as u32)
    }
}

/// A bijection of `{0, …, N-1}` stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<u32>,
}

impl Permutation {
    pub fn new(image: Vec<u32>) -> Result<Self> {
        let n = image.len();
        check_len(n)?;
        let mut seen = vec![false; n];
        for (i, &j) in image.iter().enumerate() {
            let j = j as usize;
            if j >= n || seen[j] {
                return Err(Error::NotPermutation(format!("image {j} of {i} repeated or out of range")));
            }
            seen[j] = true;
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n as u32).collect() }
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[u32] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, i: u32) -> u32 {
        self.image[i as usize]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.image.len()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation { image: inv }
    }
}

fn check_len(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("phase space must have at least one point".into()));
    }
    if n > u32::MAX as usize {
        return Err(Error::ResourceCap { what: "points", requested: n as u128, cap: u32::MAX as u128 });
    }
    Ok(())
}

/// How a cycle of `H∘G` sits relative to the two reversing involutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SymmetryClass {
    /// Odd length, one point on `Fix G` and one on `Fix H`.
    SymmetricOdd,
    /// Even length, two points on `Fix G`.
    SymmetricEvenOnG,
    /// Even length, two points on `Fix H`.
    SymmetricEvenOnH,
    /// Disjoint from both fixed sets; paired with its `G`-image.
    Asymmetric,
}

impl SymmetryClass {
    pub const ALL: [SymmetryClass; 4] = [
        SymmetryClass::SymmetricOdd,
        SymmetryClass::SymmetricEvenOnG,
        SymmetryClass::SymmetricEvenOnH,
        SymmetryClass::Asymmetric,
    ];

    /// Class from the number of `Fix G` and `Fix H` points on a cycle.
    pub fn from_signature(on_fix_g: usize, on_fix_h: usize) -> Option<Self> {
        match (on_fix_g, on_fix_h) {
            (1, 1) => Some(SymmetryClass::SymmetricOdd),
            (2, 0) => Some(SymmetryClass::SymmetricEvenOnG),
            (0, 2) => Some(SymmetryClass::SymmetricEvenOnH),
            (0, 0) => Some(SymmetryClass::Asymmetric),
            _ => None,
        }
    }

    pub fn is_symmetric(self) -> bool {
        self != SymmetryClass::Asymmetric
    }
}

/// `L = H∘G`, i.e. `L(i) = H(G(i))`.
pub fn compose(g_inv: &Involution, h_inv: &Involution) -> Result<Permutation> {
    if g_inv.n() != h_inv.n() {
        return Err(Error::SizeMismatch { left: g_inv.n(), right: h_inv.n() });
    }
    let image = g_inv.pairing.iter().map(|&j| h_inv.pairing[j as usize]).collect();
    Ok(Permutation { image })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    /// Points in orbit order, starting from the smallest index of the cycle.
    pub points: Vec<u32>,
    pub class: SymmetryClass,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub n: usize,
    pub cycles: Vec<Cycle>,
}

impl CycleDecomposition {
    pub fn symmetric_count(&self) -> usize {
        self.cycles.iter().filter(|c| c.class.is_symmetric()).count()
    }

    pub fn asymmetric_count(&self) -> usize {
        self.cycles.len() - self.symmetric_count()
    }

    /// Number of cycles of length exactly `t`.
    pub fn count_with_period(&self, t: usize) -> usize {
        self.cycles.iter().filter(|c| c.len() == t).count()
    }
}

/// Splits `l` into cycles and tags each with its [`SymmetryClass`].
///
/// Cycles are found by first return, so every length is the minimal period.
/// In debug builds `l` is checked against `H∘G`.
pub fn decompose(l: &Permutation, g_inv: &Involution, h_inv: &Involution) -> Result<CycleDecomposition> {
    let n = l.n();
    if g_inv.n() != n || h_inv.n() != n {
        return Err(Error::SizeMismatch { left: n, right: g_inv.n().max(h_inv.n()) });
    }
    if cfg!(debug_assertions) {
        for i in 0..n as u32 {
            if l.apply(i) != h_inv.apply(g_inv.apply(i)) {
                return Err(Error::InconsistentComposition { point: i as usize });
            }
        }
    }

    let mut visited = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut points = Vec::new();
        let (mut on_g, mut on_h) = (0usize, 0usize);
        let mut x = start as u32;
        while !visited[x as usize] {
            visited[x as usize] = true;
            points.push(x);
            on_g += g_inv.is_fixed(x) as usize;
            on_h += h_inv.is_fixed(x) as usize;
            x = l.apply(x);
        }
        let class = SymmetryClass::from_signature(on_g, on_h).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "cycle through {start} meets Fix G {on_g} times and Fix H {on_h} times"
            ))
        })?;
        cycles.push(Cycle { points, class });
    }
    Ok(CycleDecomposition { n, cycles })
}

/// `P_t`: the fraction of `Ω` lying on cycles of length `t`.
pub fn fraction_in_period(d: &CycleDecomposition, t: usize) -> BigRational {
    let on_t = t * d.count_with_period(t);
    BigRational::new(BigInt::from(on_t), BigInt::from(d.n))
}
