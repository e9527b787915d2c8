//! Uniform sampling and exhaustive enumeration of involutions with a
//! prescribed number of fixed points, and of pairs from the space
//! `E(g, h, N) = G × H`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::Involution;

/// Largest `N` accepted by [`enumerate_pairs`].
pub const DEFAULT_ENUMERATION_CAP: usize = 10;

/// The admissible parameters of a pair space and its exact size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSpace {
    pub n: u64,
    pub g: u64,
    pub h: u64,
    pub cardinality: BigUint,
}

impl PairSpace {
    pub fn new(n: u64, g: u64, h: u64) -> Result<Self> {
        check_parity(n, g, h)?;
        Ok(PairSpace { n, g, h, cardinality: count_pairs(n, g, h)? })
    }

    /// Either fixed set is empty, outside the range `g, h >= 1` of the model proper.
    pub fn is_degenerate(&self) -> bool {
        self.g == 0 || self.h == 0
    }
}

pub fn check_parity(n: u64, g: u64, h: u64) -> Result<()> {
    if n == 0 || g > n || h > n || !(n - g).is_multiple_of(2) || !(n - h).is_multiple_of(2) {
        return Err(Error::Parity { n, g, h });
    }
    Ok(())
}

pub(crate) fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `#E(g, h, N) = (N!)² / (2^(N-(g+h)/2) · g! · h! · ((N-g)/2)! · ((N-h)/2)!)`.
pub fn count_pairs(n: u64, g: u64, h: u64) -> Result<BigUint> {
    check_parity(n, g, h)?;
    let nf = factorial(n);
    let numerator = &nf * &nf;
    let denominator = (BigUint::one() << (n - (g + h) / 2))
        * factorial(g)
        * factorial(h)
        * factorial((n - g) / 2)
        * factorial((n - h) / 2);
    let (q, r) = numerator.div_rem(&denominator);
    debug_assert!(r.is_zero());
    Ok(q)
}

/// `#E` extended by zero outside the admissible region, for ratio formulas.
pub fn pair_count_or_zero(n: i64, g: i64, h: i64) -> BigUint {
    if n < 0 || g < 0 || h < 0 {
        return BigUint::zero();
    }
    if n == 0 {
        // The empty space carries exactly one (empty) pair when g = h = 0.
        return if g == 0 && h == 0 { BigUint::one() } else { BigUint::zero() };
    }
    count_pairs(n as u64, g as u64, h as u64).unwrap_or_default()
}

/// Number of involutions on `n` points with exactly `g` fixed points:
/// `C(n, g) · (n-g-1)!!`.
pub fn count_involutions(n: u64, g: u64) -> Result<BigUint> {
    if g > n || !(n - g).is_multiple_of(2) {
        return Err(Error::Parity { n, g, h: g });
    }
    let choose = factorial(n) / (factorial(g) * factorial(n - g));
    let matchings = (1..n - g).step_by(2).fold(BigUint::one(), |acc, k| acc * k);
    Ok(choose * matchings)
}

/// Draws a uniform involution on `n` points with `g` fixed points.
///
/// A uniform shuffle makes the first `g` entries a uniform `g`-subset and
/// the consecutive pairs of the remainder a uniform perfect matching.
pub fn sample_involution_with<R: Rng + ?Sized>(n: usize, g: usize, rng: &mut R) -> Result<Involution> {
    if n == 0 || g > n || !(n - g).is_multiple_of(2) {
        return Err(Error::Parity { n: n as u64, g: g as u64, h: g as u64 });
    }
    if n > u32::MAX as usize {
        return Err(Error::ResourceCap { what: "points", requested: n as u128, cap: u32::MAX as u128 });
    }
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);
    let mut pairing: Vec<u32> = (0..n as u32).collect();
    for pair in order[g..].chunks_exact(2) {
        pairing[pair[0] as usize] = pair[1];
        pairing[pair[1] as usize] = pair[0];
    }
    Ok(Involution::from_raw_unchecked(pairing, g))
}

/// Seeded form of [`sample_involution_with`]; identical seeds give identical output.
pub fn sample_involution(n: usize, g: usize, seed: u64) -> Result<Involution> {
    sample_involution_with(n, g, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// The random stream of trial `k` under `master_seed`.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// Samples `(G, H)` uniformly from `E(g, h, N)`.
pub fn sample_pair_with<R: Rng + ?Sized>(n: usize, g: usize, h: usize, rng: &mut R) -> Result<(Involution, Involution)> {
    check_parity(n as u64, g as u64, h as u64)?;
    let gi = sample_involution_with(n, g, rng)?;
    let hi = sample_involution_with(n, h, rng)?;
    Ok((gi, hi))
}

/// All involutions on `n` points with `g` fixed points.
///
/// Fixed-point subsets come in lexicographic order; the remaining points are
/// matched by pairing the smallest unmatched point with each candidate in turn.
pub fn enumerate_involutions(n: usize, g: usize) -> Result<Vec<Involution>> {
    if n == 0 || g > n || !(n - g).is_multiple_of(2) {
        return Err(Error::Parity { n: n as u64, g: g as u64, h: g as u64 });
    }
    let mut out = Vec::new();
    let mut subset = Vec::with_capacity(g);
    for_each_subset(n as u32, g, 0, &mut subset, &mut |fixed| {
        let rest: Vec<u32> = (0..n as u32).filter(|i| !fixed.contains(i)).collect();
        let mut pairing: Vec<u32> = (0..n as u32).collect();
        for_each_matching(&rest, &mut pairing, &mut |p| out.push(Involution::from_raw_unchecked(p.to_vec(), g)));
    });
    Ok(out)
}

fn for_each_subset(n: u32, k: usize, from: u32, acc: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
    if acc.len() == k {
        f(acc);
        return;
    }
    let need = (k - acc.len()) as u32;
    for i in from..=n.saturating_sub(need) {
        if i + need > n {
            break;
        }
        acc.push(i);
        for_each_subset(n, k, i + 1, acc, f);
        acc.pop();
    }
}

fn for_each_matching(rest: &[u32], pairing: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
    let Some((&first, tail)) = rest.split_first() else {
        f(pairing);
        return;
    };
    for (idx, &partner) in tail.iter().enumerate() {
        pairing[first as usize] = partner;
        pairing[partner as usize] = first;
        let remaining: Vec<u32> = tail.iter().enumerate().filter(|&(j, _)| j != idx).map(|(_, &x)| x).collect();
        for_each_matching(&remaining, pairing, f);
        pairing[first as usize] = first;
        pairing[partner as usize] = partner;
    }
}

/// Iterator over every pair of `E(g, h, N)`, `G` varying slowest.
#[derive(Debug, Clone)]
pub struct PairEnumerator {
    gs: Vec<Involution>,
    hs: Vec<Involution>,
    next: usize,
}

impl Iterator for PairEnumerator {
    type Item = (Involution, Involution);

    fn next(&mut self) -> Option<Self::Item> {
        let total = self.gs.len() * self.hs.len();
        if self.next >= total {
            return None;
        }
        let (gi, hi) = (self.next / self.hs.len(), self.next % self.hs.len());
        self.next += 1;
        Some((self.gs[gi].clone(), self.hs[hi].clone()))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.gs.len() * self.hs.len() - self.next;
        (left, Some(left))
    }
}

impl ExactSizeIterator for PairEnumerator {}

pub fn enumerate_pairs(n: usize, g: usize, h: usize) -> Result<PairEnumerator> {
    enumerate_pairs_capped(n, g, h, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_pairs_capped(n: usize, g: usize, h: usize, cap: usize) -> Result<PairEnumerator> {
    if n > cap {
        return Err(Error::ResourceCap { what: "enumeration size N", requested: n as u128, cap: cap as u128 });
    }
    check_parity(n as u64, g as u64, h as u64)?;
    Ok(PairEnumerator { gs: enumerate_involutions(n, g)?, hs: enumerate_involutions(n, h)?, next: 0 })
}

/// All admissible `(g, h)` for a given `N`, `g` and `h` ascending.
pub fn admissible_fixed_counts(n: u64) -> impl Iterator<Item = (u64, u64)> {
    let start = n % 2;
    (start..=n).step_by(2).flat_map(move |g| (start..=n).step_by(2).map(move |h| (g, h)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    #[test]
    fn count_pairs_examples() {
        assert_eq!(count_pairs(2, 2, 2).unwrap(), BigUint::from(1u32));
        // C(4,2)·1 choices for G, 3!! = 3 matchings for H.
        assert_eq!(count_pairs(4, 2, 0).unwrap(), BigUint::from(18u32));
        // (C(6,2)·3)² = 45².
        assert_eq!(count_pairs(6, 2, 2).unwrap(), BigUint::from(2025u32));
    }

    #[test]
    fn count_pairs_parity_error() {
        assert!(matches!(count_pairs(5, 2, 1), Err(Error::Parity { .. })));
        assert!(matches!(count_pairs(4, 6, 0), Err(Error::Parity { .. })));
    }

    #[test]
    fn count_pairs_is_product_of_involution_counts() {
        for n in 1..=14u64 {
            for (g, h) in admissible_fixed_counts(n) {
                let prod = count_involutions(n, g).unwrap() * count_involutions(n, h).unwrap();
                assert_eq!(count_pairs(n, g, h).unwrap(), prod, "N={n} g={g} h={h}");
            }
        }
    }

    #[test]
    fn zero_extension() {
        assert_eq!(pair_count_or_zero(0, 0, 0), BigUint::one());
        assert!(pair_count_or_zero(0, 1, 0).is_zero());
        assert!(pair_count_or_zero(3, -1, 1).is_zero());
        assert!(pair_count_or_zero(3, 2, 1).is_zero());
    }

    #[test]
    fn forced_samples() {
        assert_eq!(sample_involution(2, 0, 1).unwrap().pairing(), &[1, 0]);
        assert_eq!(sample_involution(2, 0, 99).unwrap().pairing(), &[1, 0]);
        assert_eq!(sample_involution(3, 3, 5).unwrap(), Involution::identity(3));
        assert!(sample_involution(5, 2, 0).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_involution(1000, 10, 42).unwrap();
        let b = sample_involution(1000, 10, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.fixed_count(), 10);
        assert_ne!(a, sample_involution(1000, 10, 43).unwrap());
    }

    fn chi_square_uniform(n: usize, g: usize, per_cell: usize, seed: u64) {
        let support = enumerate_involutions(n, g).unwrap();
        let k = support.len();
        let samples = per_cell * k;
        let index: HashMap<Vec<u32>, usize> =
            support.iter().enumerate().map(|(i, inv)| (inv.pairing().to_vec(), i)).collect();
        let mut counts = vec![0usize; k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let inv = sample_involution_with(n, g, &mut rng).unwrap();
            counts[index[inv.pairing()]] += 1;
        }
        let expected = samples as f64 / k as f64;
        let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        if k > 1 {
            let critical = ChiSquared::new((k - 1) as f64).unwrap().inverse_cdf(0.99);
            assert!(stat < critical, "N={n} g={g}: chi2 {stat} >= {critical}");
        }
    }

    #[test]
    fn uniform_over_six_involutions() {
        assert_eq!(enumerate_involutions(4, 2).unwrap().len(), 6);
        chi_square_uniform(4, 2, 10_000, 11);
    }

    #[test]
    fn uniform_for_small_supports() {
        for (n, g) in [(3, 1), (4, 0), (5, 1), (6, 2), (6, 0)] {
            chi_square_uniform(n, g, 10_000, 1000 + n as u64 * 7 + g as u64);
        }
    }

    #[test]
    fn enumeration_examples() {
        let pairs: Vec<_> = enumerate_pairs(2, 2, 0).unwrap().collect();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].0, Involution::identity(2));
        assert_eq!(pairs[0].1.pairing(), &[1, 0]);
        assert_eq!(enumerate_pairs(4, 2, 0).unwrap().count(), 18);
        assert_eq!(enumerate_pairs(6, 2, 2).unwrap().count(), 2025);
    }

    #[test]
    fn enumeration_order_is_lexicographic() {
        let invs = enumerate_involutions(4, 2).unwrap();
        let fixed: Vec<Vec<u32>> = invs.iter().map(|i| i.fixed_points().collect()).collect();
        assert_eq!(fixed, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let m = enumerate_involutions(4, 0).unwrap();
        let p: Vec<&[u32]> = m.iter().map(|i| i.pairing()).collect();
        assert_eq!(p, vec![&[1, 0, 3, 2][..], &[2, 3, 0, 1], &[3, 2, 1, 0]]);
    }

    #[test]
    fn enumeration_is_distinct_and_valid() {
        for n in 1..=8usize {
            for g in (n % 2..=n).step_by(2) {
                let invs = enumerate_involutions(n, g).unwrap();
                let distinct: std::collections::HashSet<_> = invs.iter().map(|i| i.pairing().to_vec()).collect();
                assert_eq!(distinct.len(), invs.len());
                assert_eq!(BigUint::from(invs.len()), count_involutions(n as u64, g as u64).unwrap());
                for inv in &invs {
                    assert_eq!(Involution::new(inv.pairing().to_vec()).unwrap().fixed_count(), g);
                }
            }
        }
    }

    #[test]
    fn enumeration_cap() {
        assert!(matches!(enumerate_pairs(12, 0, 0), Err(Error::ResourceCap { .. })));
        assert!(enumerate_pairs_capped(12, 12, 12, 12).is_ok());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn samples_satisfy_involution_invariants(n in 1usize..400, g_half in 0usize..200, seed: u64) {
                let g = (n % 2 + 2 * g_half).min(n);
                let inv = sample_involution(n, g, seed).unwrap();
                let checked = Involution::new(inv.pairing().to_vec()).unwrap();
                prop_assert_eq!(checked.fixed_count(), g);
                prop_assert_eq!((n - inv.fixed_count()) % 2, 0);
            }
        }
    }
}
