//! Reversible maps over `F_p` given as a pair of involutions `(G, H)`.
//!
//! * Hénon: `G₁(x, y) = (y, x)`, `H₁(x, y) = (x, -y + x² + a)`.
//! * 3D rational map: `G₂(x, y, z) = (x + e(2y-k)(z + e(y-k)), k - y, z + e(2y-k))`,
//!   `H₂(x, y, z) = (y(2 - 2x/F + x²/F²), x/F, -z)` with `F = 1 + (1-y)²`,
//!   which never vanishes when `p ≡ 3 (mod 4)`.
//!
//! Points are coordinate triples of raw residues; unused coordinates are 0.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{is_three_mod_four, FieldElement, PrimeField};
use crate::model::Involution;
use crate::sampler::trial_rng;

pub type Point = [u64; 3];

/// Largest period accepted by [`symmetric_cycle_count`].
pub const DEFAULT_PERIOD_LIMIT: u64 = 64;

/// Largest space checked exhaustively by [`ReversiblePair::check_good_reduction`].
pub const EXHAUSTIVE_CHECK_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "lowercase")]
pub enum MapKind {
    Henon { a: u64 },
    Map3d { e: u64, k: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReversiblePair {
    field: PrimeField,
    kind: MapKind,
    half: u64,
}

impl ReversiblePair {
    pub fn henon(field: PrimeField, a: FieldElement) -> Result<Self> {
        check_field(&field, &a)?;
        Ok(ReversiblePair { field, kind: MapKind::Henon { a: a.value() }, half: field.inv_raw(2)? })
    }

    /// Refuses `p ≡ 1 (mod 4)`, where `F = 1 + (1-y)²` has zeros.
    pub fn map3d(field: PrimeField, e: FieldElement, k: FieldElement) -> Result<Self> {
        check_field(&field, &e)?;
        check_field(&field, &k)?;
        if !is_three_mod_four(field.p()) {
            return Err(Error::NotThreeModFour(field.p()));
        }
        Ok(ReversiblePair { field, kind: MapKind::Map3d { e: e.value(), k: k.value() }, half: field.inv_raw(2)? })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        match self.kind {
            MapKind::Henon { .. } => 2,
            MapKind::Map3d { .. } => 3,
        }
    }

    /// `p^n`, the number of points of the phase space.
    pub fn space_size(&self) -> u64 {
        self.field.space_size(self.dimension() as u32).expect("p < 2^31 and n <= 3")
    }

    pub fn g(&self, [x, y, z]: Point) -> Point {
        let f = &self.field;
        match self.kind {
            MapKind::Henon { .. } => [y, x, 0],
            MapKind::Map3d { e, k } => {
                let two_y_k = f.sub_raw(f.add_raw(y, y), k);
                let inner = f.add_raw(z, f.mul_raw(e, f.sub_raw(y, k)));
                [
                    f.add_raw(x, f.mul_raw(e, f.mul_raw(two_y_k, inner))),
                    f.sub_raw(k, y),
                    f.add_raw(z, f.mul_raw(e, two_y_k)),
                ]
            }
        }
    }

    pub fn h(&self, [x, y, z]: Point) -> Point {
        let f = &self.field;
        match self.kind {
            MapKind::Henon { a } => [x, f.add_raw(f.neg_raw(y), f.add_raw(f.mul_raw(x, x), a)), 0],
            MapKind::Map3d { .. } => {
                let one_minus_y = f.sub_raw(1, y);
                let denom = f.add_raw(1, f.mul_raw(one_minus_y, one_minus_y));
                let inv = f.inv_raw(denom).expect("1 + (1-y)^2 vanishes only when p = 1 mod 4");
                let u = f.mul_raw(x, inv);
                // y (2 - 2u + u²) with u = x/F
                let factor = f.add_raw(f.sub_raw(2, f.add_raw(u, u)), f.mul_raw(u, u));
                [f.mul_raw(y, factor), u, f.neg_raw(z)]
            }
        }
    }

    /// `L = H∘G`.
    #[inline]
    pub fn l(&self, pt: Point) -> Point {
        self.h(self.g(pt))
    }

    pub fn index(&self, [x, y, z]: Point) -> u64 {
        let p = self.field.p();
        x + p * (y + p * z)
    }

    pub fn point(&self, idx: u64) -> Point {
        let p = self.field.p();
        let mut pt = [0; 3];
        let mut rest = idx;
        for c in pt.iter_mut().take(self.dimension()) {
            *c = rest % p;
            rest /= p;
        }
        pt
    }

    fn to_point(&self, coords: &[FieldElement]) -> Result<Point> {
        if coords.len() != self.dimension() {
            return Err(Error::SizeMismatch { left: coords.len(), right: self.dimension() });
        }
        let mut pt = [0; 3];
        for (slot, c) in pt.iter_mut().zip(coords) {
            check_field(&self.field, c)?;
            *slot = c.value();
        }
        Ok(pt)
    }

    fn to_coords(&self, pt: Point) -> Vec<FieldElement> {
        pt[..self.dimension()].iter().map(|&v| self.field.elem(v as i64)).collect()
    }

    /// `G` on field-element coordinates.
    pub fn apply_g(&self, coords: &[FieldElement]) -> Result<Vec<FieldElement>> {
        Ok(self.to_coords(self.g(self.to_point(coords)?)))
    }

    pub fn apply_h(&self, coords: &[FieldElement]) -> Result<Vec<FieldElement>> {
        Ok(self.to_coords(self.h(self.to_point(coords)?)))
    }

    pub fn apply_l(&self, coords: &[FieldElement]) -> Result<Vec<FieldElement>> {
        Ok(self.to_coords(self.l(self.to_point(coords)?)))
    }

    /// Checks `G∘G = H∘H = id`: on every point when the space has at most
    /// [`EXHAUSTIVE_CHECK_LIMIT`] points, otherwise on `samples` seeded random points.
    pub fn check_good_reduction(&self, samples: u64, seed: u64) -> GoodReduction {
        let size = self.space_size();
        let involutive = |idx: u64| {
            let pt = self.point(idx);
            self.g(self.g(pt)) == pt && self.h(self.h(pt)) == pt
        };
        if size <= EXHAUSTIVE_CHECK_LIMIT {
            let failures = (0..size).into_par_iter().filter(|&i| !involutive(i)).count() as u64;
            GoodReduction { exhaustive: true, checked: size, failures }
        } else {
            let mut rng = trial_rng(seed, 0);
            let failures = (0..samples).filter(|_| !involutive(rng.random_range(0..size))).count() as u64;
            GoodReduction { exhaustive: false, checked: samples, failures }
        }
    }

    /// Counts points where `G∘L∘G ≠ L⁻¹`, i.e. where `(L∘G)² ≠ id`.
    pub fn reversibility_failures(&self, samples: u64, seed: u64) -> u64 {
        let size = self.space_size();
        let mut rng = trial_rng(seed, 1);
        (0..samples)
            .filter(|_| {
                let pt = self.point(rng.random_range(0..size));
                self.l(self.g(self.l(self.g(pt)))) != pt
            })
            .count() as u64
    }
}

fn check_field(field: &PrimeField, e: &FieldElement) -> Result<()> {
    if e.modulus() != field.p() {
        return Err(Error::FieldMismatch { left: field.p(), right: e.modulus() });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodReduction {
    pub exhaustive: bool,
    pub checked: u64,
    pub failures: u64,
}

impl GoodReduction {
    pub fn holds(&self) -> bool {
        self.failures == 0
    }
}

/// Point indices of `Fix G` and `Fix H`, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedSets {
    pub fix_g: Vec<u64>,
    pub fix_h: Vec<u64>,
    pub g: u64,
    pub h: u64,
}

impl FixedSets {
    fn from_lists(mut fix_g: Vec<u64>, mut fix_h: Vec<u64>) -> Self {
        fix_g.sort_unstable();
        fix_h.sort_unstable();
        let (g, h) = (fix_g.len() as u64, fix_h.len() as u64);
        FixedSets { fix_g, fix_h, g, h }
    }
}

/// Fixed sets from their parametrisations:
/// Hénon `{(x, x)}` and `{(x, (x² + a)/2)}`; 3D map `{(x, k/2, z)}` and `{(yF(y), y, 0)}`.
pub fn fixed_sets(pair: &ReversiblePair) -> FixedSets {
    let f = pair.field;
    let p = f.p();
    match pair.kind {
        MapKind::Henon { a } => {
            let fix_g = (0..p).map(|x| pair.index([x, x, 0])).collect();
            let fix_h = (0..p)
                .map(|x| pair.index([x, f.mul_raw(f.add_raw(f.mul_raw(x, x), a), pair.half), 0]))
                .collect();
            FixedSets::from_lists(fix_g, fix_h)
        }
        MapKind::Map3d { k, .. } => {
            let y0 = f.mul_raw(k, pair.half);
            let fix_g = (0..p).flat_map(|z| (0..p).map(move |x| [x, y0, z])).map(|pt| pair.index(pt)).collect();
            let fix_h = (0..p)
                .map(|y| {
                    let one_minus_y = f.sub_raw(1, y);
                    let big_f = f.add_raw(1, f.mul_raw(one_minus_y, one_minus_y));
                    pair.index([f.mul_raw(y, big_f), y, 0])
                })
                .collect();
            FixedSets::from_lists(fix_g, fix_h)
        }
    }
}

/// Fixed sets by scanning every point; refused above `cap` points.
pub fn fixed_sets_by_scan(pair: &ReversiblePair, cap: u64) -> Result<FixedSets> {
    let size = check_cap(pair, cap)?;
    let fix_g = (0..size).into_par_iter().filter(|&i| pair.g(pair.point(i)) == pair.point(i)).collect();
    let fix_h = (0..size).into_par_iter().filter(|&i| pair.h(pair.point(i)) == pair.point(i)).collect();
    Ok(FixedSets::from_lists(fix_g, fix_h))
}

fn check_cap(pair: &ReversiblePair, cap: u64) -> Result<u64> {
    let size = pair.space_size();
    if size > cap || size > u32::MAX as u64 {
        return Err(Error::ResourceCap { what: "phase-space points (raise REVMAP_CAP_POINTS)", requested: size as u128, cap: cap as u128 });
    }
    Ok(size)
}

/// Dense `G` and `H` on the indexed phase space; fails if either is not an involution.
pub fn build_permutation(pair: &ReversiblePair, cap: u64) -> Result<(Involution, Involution)> {
    let size = check_cap(pair, cap)?;
    let table = |map: &(dyn Fn(Point) -> Point + Sync)| -> Vec<u32> {
        (0..size).into_par_iter().map(|i| pair.index(map(pair.point(i))) as u32).collect()
    };
    let g = Involution::new(table(&|pt| pair.g(pt)))?;
    let h = Involution::new(table(&|pt| pair.h(pt)))?;
    Ok((g, h))
}

/// Minimal period of `start` under `L` if it is at most `limit`.
pub fn first_return(pair: &ReversiblePair, start: Point, limit: u64) -> Option<u64> {
    let mut pt = start;
    for step in 1..=limit {
        pt = pair.l(pt);
        if pt == start {
            return Some(step);
        }
    }
    None
}

/// Number of symmetric cycles of minimal period `t`, found by iterating `L`
/// from the points of the fixed sets.
///
/// An odd symmetric cycle meets `Fix G` exactly once. An even one meets
/// `Fix G` twice or `Fix H` twice, so even seeds from both lines are halved.
pub fn symmetric_cycle_count(pair: &ReversiblePair, t: u64) -> Result<u64> {
    symmetric_cycle_count_limited(pair, t, DEFAULT_PERIOD_LIMIT)
}

pub fn symmetric_cycle_count_limited(pair: &ReversiblePair, t: u64, limit: u64) -> Result<u64> {
    if t == 0 {
        return Err(Error::InvalidArgument("period must be at least 1".into()));
    }
    if t > limit {
        return Err(Error::ResourceCap { what: "period for orbit search", requested: t as u128, cap: limit as u128 });
    }
    let fixed = fixed_sets(pair);
    let hits = |seeds: &[u64]| -> u64 {
        seeds.par_iter().filter(|&&i| first_return(pair, pair.point(i), t) == Some(t)).count() as u64
    };
    if t % 2 == 1 {
        Ok(hits(&fixed.fix_g))
    } else {
        let seeds = hits(&fixed.fix_g) + hits(&fixed.fix_h);
        debug_assert!(seeds % 2 == 0);
        Ok(seeds / 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{compose, decompose};

    fn henon(p: u64, a: i64) -> ReversiblePair {
        let f = PrimeField::new(p).unwrap();
        ReversiblePair::henon(f, f.elem(a)).unwrap()
    }

    fn map3d(p: u64, e: i64, k: i64) -> ReversiblePair {
        let f = PrimeField::new(p).unwrap();
        ReversiblePair::map3d(f, f.elem(e), f.elem(k)).unwrap()
    }

    #[test]
    fn henon_hand_evaluation() {
        let m = henon(5, 1);
        let f = m.field();
        assert_eq!(m.g([0, 0, 0]), [0, 0, 0]);
        assert_eq!(m.h([0, 0, 0]), [0, 1, 0]);
        assert_eq!(m.l([0, 0, 0]), [0, 1, 0]);
        let l = m.apply_l(&[f.elem(0), f.elem(0)]).unwrap();
        assert_eq!(l, vec![f.elem(0), f.elem(1)]);
        assert!(m.apply_l(&[f.elem(0)]).is_err());
    }

    #[test]
    fn henon_involutions_on_f5() {
        let m = henon(5, 1);
        for i in 0..25 {
            let pt = m.point(i);
            assert_eq!(m.g(m.g(pt)), pt);
            assert_eq!(m.h(m.h(pt)), pt);
        }
        assert!(m.check_good_reduction(0, 0).holds());
    }

    #[test]
    fn map3d_involutions_on_f7() {
        let m = map3d(7, 1, 1);
        let r = m.check_good_reduction(0, 0);
        assert!(r.exhaustive && r.holds());
        assert_eq!(r.checked, 343);
    }

    #[test]
    fn map3d_refuses_one_mod_four() {
        let f = PrimeField::new(5).unwrap();
        assert!(matches!(ReversiblePair::map3d(f, f.elem(1), f.elem(1)), Err(Error::NotThreeModFour(5))));
        let g = PrimeField::new(7).unwrap();
        assert!(matches!(ReversiblePair::map3d(g, f.elem(1), g.elem(1)), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn fixed_set_sizes() {
        let h = fixed_sets(&henon(5, 1));
        assert_eq!((h.g, h.h), (5, 5));
        let m = fixed_sets(&map3d(7, 1, 1));
        assert_eq!((m.g, m.h), (49, 7));
        // x = 0 on the H-line: 2y = a.
        let m5 = henon(5, 1);
        let y = m5.field().elem(1).checked_mul(&m5.field().elem(2).inv().unwrap()).unwrap();
        assert!(h.fix_h.contains(&m5.index([0, y.value(), 0])));
    }

    #[test]
    fn closed_form_fixed_sets_match_scan() {
        for p in [3, 5, 7, 11, 13, 31] {
            for a in [0, 1, 2] {
                let m = henon(p, a);
                assert_eq!(fixed_sets(&m), fixed_sets_by_scan(&m, 1 << 20).unwrap(), "p={p} a={a}");
            }
        }
        for p in [3, 7, 11, 19] {
            for (e, k) in [(1, 1), (2, 3), (0, 5)] {
                let m = map3d(p, e, k);
                assert_eq!(fixed_sets(&m), fixed_sets_by_scan(&m, 1 << 20).unwrap(), "p={p} e={e} k={k}");
            }
        }
    }

    #[test]
    fn build_small_henon() {
        let m = henon(3, 1);
        let (g, h) = build_permutation(&m, 100).unwrap();
        assert_eq!(g.n(), 9);
        assert_eq!((g.fixed_count(), h.fixed_count()), (3, 3));
        assert!(matches!(build_permutation(&m, 8), Err(Error::ResourceCap { .. })));
    }

    #[test]
    fn full_decomposition_symmetric_counts() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            let m = henon(p, 1);
            let (g, h) = build_permutation(&m, 1 << 20).unwrap();
            let d = decompose(&compose(&g, &h).unwrap(), &g, &h).unwrap();
            assert_eq!(d.symmetric_count() as u64, p);
        }
        let m = map3d(7, 1, 1);
        let (g, h) = build_permutation(&m, 1 << 20).unwrap();
        let d = decompose(&compose(&g, &h).unwrap(), &g, &h).unwrap();
        assert_eq!(d.symmetric_count(), 28);
    }

    #[test]
    fn orbit_search_matches_full_decomposition() {
        for (m, tmax) in [(henon(31, 1), 40), (henon(29, 3), 40), (map3d(11, 1, 1), 40), (map3d(7, 2, 3), 30)] {
            let (g, h) = build_permutation(&m, 1 << 20).unwrap();
            let d = decompose(&compose(&g, &h).unwrap(), &g, &h).unwrap();
            for t in 1..=tmax {
                let full = d.cycles.iter().filter(|c| c.len() as u64 == t && c.class.is_symmetric()).count() as u64;
                assert_eq!(symmetric_cycle_count_limited(&m, t, 64).unwrap(), full, "{:?} t={t}", m.kind());
            }
        }
    }

    #[test]
    fn reversibility_identity() {
        assert_eq!(henon(101, 1).reversibility_failures(2000, 3), 0);
        assert_eq!(map3d(23, 1, 1).reversibility_failures(2000, 3), 0);
    }

    #[test]
    fn sampled_good_reduction_on_large_field() {
        let m = map3d(1019, 1, 1);
        let r = m.check_good_reduction(100_000, 9);
        assert!(!r.exhaustive && r.holds());
        assert_eq!(r.checked, 100_000);
    }

    #[test]
    fn period_limit() {
        assert!(matches!(symmetric_cycle_count(&henon(7, 1), 65), Err(Error::ResourceCap { .. })));
        assert!(symmetric_cycle_count(&henon(7, 1), 0).is_err());
    }
}
