//! Arithmetic in `F_p` for odd primes `p < 2^31`, and the mixed-radix
//! indexing of `F_p^n` used to hand points to [`crate::model`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deterministic Miller–Rabin; this witness set is exact below 2^64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Primes in `lo..=hi`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

pub fn is_three_mod_four(p: u64) -> bool {
    p % 4 == 3
}

/// The field `F_p`. Raw residues in `[0, p)` are handled by the `*_raw`
/// methods; [`FieldElement`] carries its modulus for checked arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub const MAX_MODULUS: u64 = 1 << 31;

    pub fn new(p: u64) -> Result<Self> {
        if !(3..Self::MAX_MODULUS).contains(&p) {
            return Err(Error::ModulusRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Reduces any signed integer into the field.
    pub fn elem(&self, v: i64) -> FieldElement {
        FieldElement { value: v.rem_euclid(self.p as i64) as u64, p: self.p }
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.p).map(move |v| FieldElement { value: v, p: self.p })
    }

    #[inline]
    pub fn add_raw(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub_raw(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg_raw(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        // p < 2^31 keeps the product below 2^62.
        a * b % self.p
    }

    pub fn pow_raw(&self, base: u64, exp: u64) -> u64 {
        pow_mod_u64(base, exp, self.p)
    }

    pub fn inv_raw(&self, a: u64) -> Result<u64> {
        if a.is_multiple_of(self.p) {
            return Err(Error::DivisionByZero(self.p));
        }
        Ok(self.pow_raw(a, self.p - 2))
    }

    /// Encodes `(x, y, z, …)` as `x + p·y + p²·z + …`.
    pub fn point_index(&self, coords: &[FieldElement]) -> Result<u64> {
        let mut idx = 0u64;
        for c in coords.iter().rev() {
            if c.p != self.p {
                return Err(Error::FieldMismatch { left: self.p, right: c.p });
            }
            idx = idx
                .checked_mul(self.p)
                .and_then(|v| v.checked_add(c.value))
                .ok_or(Error::ResourceCap { what: "point index", requested: u128::MAX, cap: u64::MAX as u128 })?;
        }
        Ok(idx)
    }

    /// Inverse of [`point_index`](Self::point_index) for `dim` coordinates.
    pub fn point_coords(&self, mut idx: u64, dim: usize) -> Vec<FieldElement> {
        (0..dim)
            .map(|_| {
                let v = idx % self.p;
                idx /= self.p;
                FieldElement { value: v, p: self.p }
            })
            .collect()
    }

    /// `p^dim`, or `None` on overflow.
    pub fn space_size(&self, dim: u32) -> Option<u64> {
        self.p.checked_pow(dim)
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// A residue together with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElement {
    value: u64,
    p: u64,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &FieldElement) -> Result<PrimeField> {
        if self.p != other.p {
            return Err(Error::FieldMismatch { left: self.p, right: other.p });
        }
        Ok(PrimeField { p: self.p })
    }

    fn with(&self, value: u64) -> FieldElement {
        FieldElement { value, p: self.p }
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement> {
        let f = self.same_field(other)?;
        Ok(self.with(f.add_raw(self.value, other.value)))
    }

    pub fn checked_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        let f = self.same_field(other)?;
        Ok(self.with(f.sub_raw(self.value, other.value)))
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        let f = self.same_field(other)?;
        Ok(self.with(f.mul_raw(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        let f = PrimeField { p: self.p };
        Ok(self.with(f.inv_raw(self.value)?))
    }

    pub fn pow(&self, exp: u64) -> FieldElement {
        self.with(pow_mod_u64(self.value, exp, self.p))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// Operator forms panic on mixed moduli; use the `checked_*` methods to recover.
impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.checked_add(&rhs).expect("field mismatch")
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.checked_sub(&rhs).expect("field mismatch")
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.checked_mul(&rhs).expect("field mismatch")
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let f = PrimeField { p: self.p };
        self.with(f.neg_raw(self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn small_arithmetic() {
        let f = f5();
        assert_eq!((f.elem(3) * f.elem(4)).value(), 2);
        assert_eq!((f.elem(4) + f.elem(1)).value(), 0);
        assert_eq!((-f.elem(0)).value(), 0);
        assert_eq!((f.elem(1) - f.elem(3)).value(), 3);
        assert_eq!(f.elem(-1).value(), 4);
    }

    #[test]
    fn inverses() {
        let f = f5();
        assert_eq!(f.elem(2).inv().unwrap().value(), 3);
        assert_eq!(f.elem(1).inv().unwrap().value(), 1);
        assert_eq!(f.elem(4).inv().unwrap().value(), 4);
        assert!(matches!(f.elem(0).inv(), Err(Error::DivisionByZero(5))));
        let g = PrimeField::new(6571).unwrap();
        assert_eq!(g.elem(6570).inv().unwrap().value(), 6570);
    }

    #[test]
    fn mismatch() {
        let a = f5().elem(1);
        let b = PrimeField::new(7).unwrap().elem(1);
        assert!(matches!(a.checked_add(&b), Err(Error::FieldMismatch { .. })));
        assert!(f5().point_index(&[a, b]).is_err());
    }

    #[test]
    fn moduli() {
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new((1 << 31) + 11).is_err());
        assert!(PrimeField::new(2_147_483_647).is_ok());
    }

    #[test]
    fn three_mod_four() {
        assert!(is_three_mod_four(7));
        assert!(!is_three_mod_four(5));
        assert!(is_three_mod_four(6571));
        assert_eq!(6571, 4 * 1642 + 3);
    }

    #[test]
    fn primality_against_sieve() {
        let limit = 20_000usize;
        let mut sieve = vec![true; limit + 1];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..=limit {
            if sieve[i] {
                for j in (i * i..=limit).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (n, &p) in sieve.iter().enumerate() {
            assert_eq!(is_prime(n as u64), p, "n={n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        // Strong pseudoprime to every prime base up to 23.
        assert!(!is_prime(3_825_123_056_546_413_051));
        assert!(!is_prime(1_000_000_007 * 998_244_353));
        assert_eq!(primes_in(6560, 6572), vec![6563, 6569, 6571]);
    }

    #[test]
    fn point_index_examples() {
        let f = f5();
        assert_eq!(f.point_index(&[f.elem(0), f.elem(0)]).unwrap(), 0);
        assert_eq!(f.point_index(&[f.elem(1), f.elem(2)]).unwrap(), 11);
        assert_eq!(f.point_index(&[f.elem(1), f.elem(2), f.elem(3)]).unwrap(), 1 + 10 + 75);
    }

    #[test]
    fn point_index_round_trip() {
        let f = PrimeField::new(7).unwrap();
        for dim in [2usize, 3] {
            let size = f.space_size(dim as u32).unwrap();
            for idx in 0..size {
                let c = f.point_coords(idx, dim);
                assert_eq!(f.point_index(&c).unwrap(), idx);
            }
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn field() -> impl Strategy<Value = PrimeField> {
            prop::sample::select(vec![3u64, 5, 7, 11, 6563, 6571, 65_521, 2_147_483_647])
                .prop_map(|p| PrimeField::new(p).unwrap())
        }

        proptest! {
            #[test]
            fn field_axioms(f in field(), a: i64, b: i64, c: i64) {
                let (a, b, c) = (f.elem(a), f.elem(b), f.elem(c));
                prop_assert_eq!((a + b) + c, a + (b + c));
                prop_assert_eq!((a * b) * c, a * (b * c));
                prop_assert_eq!(a * (b + c), a * b + a * c);
                prop_assert_eq!(a + b, b + a);
                prop_assert_eq!(a + (-a), f.zero());
                prop_assert_eq!(a - b, a + (-b));
                if !a.is_zero() {
                    prop_assert_eq!(a * a.inv().unwrap(), f.one());
                }
            }
        }
    }
}
