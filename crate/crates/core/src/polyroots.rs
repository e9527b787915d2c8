//! Dense univariate polynomials over `F_p` and distinct-root counting by
//! `deg gcd(x^p - x, f)`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ffield::PrimeField;

/// Coefficients over `Z` of the degree-6 polynomial whose roots are the
/// diagonal points `(x, x)` on symmetric 5-cycles of the Hénon map with `a = 1`.
pub const PHI5_COEFFS: [i64; 7] = [3, -4, 8, -6, 5, -2, 1];

/// Low degree first, trimmed so the leading coefficient is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePoly {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl PrimePoly {
    pub fn new(field: PrimeField, coeffs: &[i64]) -> Self {
        let coeffs = coeffs.iter().map(|&c| field.elem(c).value()).collect();
        PrimePoly::from_raw(field, coeffs)
    }

    fn from_raw(field: PrimeField, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PrimePoly { field, coeffs }
    }

    pub fn zero(field: PrimeField) -> Self {
        PrimePoly { field, coeffs: Vec::new() }
    }

    pub fn one(field: PrimeField) -> Self {
        PrimePoly { field, coeffs: vec![1] }
    }

    /// The monomial `x`.
    pub fn x(field: PrimeField) -> Self {
        PrimePoly { field, coeffs: vec![0, 1] }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add_raw(f.mul_raw(acc, x), c))
    }

    fn check(&self, other: &PrimePoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch { left: self.field.p(), right: other.field.p() });
        }
        Ok(())
    }

    pub fn add(&self, other: &PrimePoly) -> Result<PrimePoly> {
        self.check(other)?;
        let f = &self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        let c = (0..len)
            .map(|i| f.add_raw(*self.coeffs.get(i).unwrap_or(&0), *other.coeffs.get(i).unwrap_or(&0)))
            .collect();
        Ok(PrimePoly::from_raw(self.field, c))
    }

    pub fn sub(&self, other: &PrimePoly) -> Result<PrimePoly> {
        self.check(other)?;
        let f = &self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        let c = (0..len)
            .map(|i| f.sub_raw(*self.coeffs.get(i).unwrap_or(&0), *other.coeffs.get(i).unwrap_or(&0)))
            .collect();
        Ok(PrimePoly::from_raw(self.field, c))
    }

    pub fn mul(&self, other: &PrimePoly) -> Result<PrimePoly> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(PrimePoly::zero(self.field));
        }
        let f = &self.field;
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add_raw(c[i + j], f.mul_raw(a, b));
            }
        }
        Ok(PrimePoly::from_raw(self.field, c))
    }

    /// Quotient and remainder of long division by a nonzero divisor.
    pub fn div_rem(&self, divisor: &PrimePoly) -> Result<(PrimePoly, PrimePoly)> {
        self.check(divisor)?;
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let f = &self.field;
        let lead_inv = f.inv_raw(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((PrimePoly::zero(self.field), self.clone()));
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for shift in (0..quot.len()).rev() {
            let c = f.mul_raw(rem[shift + dd], lead_inv);
            quot[shift] = c;
            if c != 0 {
                for (j, &d) in divisor.coeffs.iter().enumerate() {
                    rem[shift + j] = f.sub_raw(rem[shift + j], f.mul_raw(c, d));
                }
            }
        }
        rem.truncate(dd);
        Ok((PrimePoly::from_raw(self.field, quot), PrimePoly::from_raw(self.field, rem)))
    }

    pub fn rem(&self, divisor: &PrimePoly) -> Result<PrimePoly> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Scaled to leading coefficient 1; the zero polynomial is returned unchanged.
    pub fn monic(&self) -> PrimePoly {
        if self.is_zero() {
            return self.clone();
        }
        let f = &self.field;
        let inv = f.inv_raw(self.leading()).expect("leading coefficient is nonzero");
        PrimePoly::from_raw(self.field, self.coeffs.iter().map(|&c| f.mul_raw(c, inv)).collect())
    }
}

impl fmt::Display for PrimePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{c}x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

fn check_modulus(modulus: &PrimePoly) -> Result<()> {
    match modulus.degree() {
        None => Err(Error::ZeroPolynomial),
        Some(0) => Err(Error::InvalidArgument("modulus must have degree at least 1".into())),
        Some(_) => Ok(()),
    }
}

/// `a · b mod m`.
pub fn mod_mul(a: &PrimePoly, b: &PrimePoly, modulus: &PrimePoly) -> Result<PrimePoly> {
    check_modulus(modulus)?;
    a.mul(b)?.rem(modulus)
}

/// `base^exponent mod m` by square-and-multiply.
pub fn mod_pow(base: &PrimePoly, exponent: &BigUint, modulus: &PrimePoly) -> Result<PrimePoly> {
    check_modulus(modulus)?;
    let mut acc = PrimePoly::one(base.field);
    let sq = base.rem(modulus)?;
    let bits = exponent.bits();
    for bit in (0..bits).rev() {
        acc = mod_mul(&acc, &acc, modulus)?;
        if exponent.bit(bit) {
            acc = mod_mul(&acc, &sq, modulus)?;
        }
    }
    acc.rem(modulus)
}

/// Monic greatest common divisor by Euclid's algorithm.
pub fn poly_gcd(a: &PrimePoly, b: &PrimePoly) -> Result<PrimePoly> {
    a.check(b)?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    while !r1.is_zero() {
        let r2 = r0.rem(&r1)?;
        r0 = r1;
        r1 = r2;
    }
    Ok(r0.monic())
}

/// Number of distinct roots of `f` in `F_p`, as `deg gcd(x^p - x mod f, f)`.
pub fn count_roots(f: &PrimePoly) -> Result<usize> {
    match f.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Ok(0),
        Some(_) => {}
    }
    let x = PrimePoly::x(f.field);
    let xp = mod_pow(&x, &BigUint::from(f.field.p()), f)?;
    let g = poly_gcd(&xp.sub(&x)?, f)?;
    Ok(g.degree().unwrap_or(0))
}

/// Roots of `f` found by evaluating at every element of `F_p`.
pub fn roots_by_evaluation(f: &PrimePoly) -> Vec<u64> {
    (0..f.field.p()).filter(|&x| f.eval(x) == 0).collect()
}

pub fn phi5(field: PrimeField) -> PrimePoly {
    PrimePoly::new(field, &PHI5_COEFFS)
}

/// `x^e` with a machine-size exponent, for naive comparisons.
pub fn monomial(field: PrimeField, e: usize) -> PrimePoly {
    let mut c = vec![0u64; e + 1];
    c[e] = 1;
    PrimePoly { field, coeffs: c }
}

impl PrimePoly {
    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn constant_is_zero(&self) -> bool {
        self.coeffs.first().is_none_or(|c| c.is_zero())
    }
}
