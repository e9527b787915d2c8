//! Exact finite-N expectations and the asymptotic laws they converge to.
//!
//! Every finite-N quantity is an exact rational built from ratios of pair
//! space sizes `#E(g', h', N') / #E(g, h, N)`. The expanded product forms are
//! kept only as cross-checks.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampler::{check_parity, factorial, pair_count_or_zero};

/// `N`, `g`, `h` and the derived scales of the model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoryParams {
    pub n: u64,
    pub g: u64,
    pub h: u64,
    /// `2N / (g+h)`, the asymptotic mean cycle length.
    pub z: BigRational,
    /// `(g+h) / N`.
    pub kappa: BigRational,
    /// `gh / N`.
    pub f_odd: BigRational,
    /// `(g² + h²) / 2N`.
    pub f_even: BigRational,
}

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn to_rational(x: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

impl TheoryParams {
    /// Requires `g + h > 0` so that `z` is finite.
    pub fn new(n: u64, g: u64, h: u64) -> Result<Self> {
        check_parity(n, g, h)?;
        if g + h == 0 {
            return Err(Error::InvalidArgument("g + h must be positive for the scaling z".into()));
        }
        Ok(TheoryParams {
            n,
            g,
            h,
            z: ratio(2 * n, g + h),
            kappa: ratio(g + h, n),
            f_odd: ratio(g * h, n),
            f_even: ratio(g * g + h * h, 2 * n),
        })
    }

    pub fn z_f64(&self) -> f64 {
        2.0 * self.n as f64 / (self.g + self.h) as f64
    }

    /// `f` for period `t`: `gh/N` when `t` is odd, `(g²+h²)/2N` when even.
    pub fn f(&self, t: u64) -> &BigRational {
        if t % 2 == 1 {
            &self.f_odd
        } else {
            &self.f_even
        }
    }

    pub fn repetition(&self, t: u64) -> RepetitionParams {
        RepetitionParams::new(self, t)
    }

    /// Limit of the odd-period share of the symmetric mass, `2gh/(g+h)²`.
    pub fn odd_share(&self) -> f64 {
        let (g, h) = (self.g as f64, self.h as f64);
        2.0 * g * h / ((g + h) * (g + h))
    }

    /// Limit of the even-period share, `(g²+h²)/(g+h)²`.
    pub fn even_share(&self) -> f64 {
        1.0 - self.odd_share()
    }

    fn pairs(&self) -> BigRational {
        to_rational(pair_count_or_zero(self.n as i64, self.g as i64, self.h as i64))
    }

    /// `#E(g+dg, h+dh, N+dn) / #E(g, h, N)`.
    fn pair_ratio(&self, dn: i64, dg: i64, dh: i64) -> BigRational {
        let num = pair_count_or_zero(self.n as i64 + dn, self.g as i64 + dg, self.h as i64 + dh);
        to_rational(num) / self.pairs()
    }
}

/// Scaled period, its log-corrected form and the Poisson parameter for a
/// fixed period `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepetitionParams {
    pub t: u64,
    pub f: f64,
    /// `(t-1)(g+h) / 2N`.
    pub x: f64,
    /// `x - ln f`; infinite when `f = 0`.
    pub y: f64,
    /// `e^{-y} = f·e^{-x}`.
    pub alpha: f64,
}

impl RepetitionParams {
    pub fn new(params: &TheoryParams, t: u64) -> Self {
        let f = params.f(t).to_f64().unwrap_or(f64::NAN);
        let x = (t.saturating_sub(1)) as f64 * (params.g + params.h) as f64 / (2.0 * params.n as f64);
        let y = x - f.ln();
        RepetitionParams { t, f, x, y, alpha: (-y).exp() }
    }
}

/// How `f` behaves along `g = N^r`, `h = N^s` for fixed sets that are affine
/// subspaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GrowthRegime {
    Constant,
    Diverging,
    Vanishing,
}

/// Exponent of `N` in `f` (odd: `r+s-1`; even: `max(2r-1, 2s-1)`).
pub fn f_growth_exponent(r: f64, s: f64, t: u64) -> f64 {
    if t % 2 == 1 {
        r + s - 1.0
    } else {
        (2.0 * r - 1.0).max(2.0 * s - 1.0)
    }
}

pub fn f_growth_regime(r: f64, s: f64, t: u64) -> GrowthRegime {
    let e = f_growth_exponent(r, s, t);
    if e.abs() < 1e-12 {
        GrowthRegime::Constant
    } else if e > 0.0 {
        GrowthRegime::Diverging
    } else {
        GrowthRegime::Vanishing
    }
}

/// Whether exponents `0 <= r, s < 1` give `g+h → ∞` and `(g+h)/N → 0`.
pub fn growth_conditions_hold(r: f64, s: f64) -> bool {
    (0.0..1.0).contains(&r) && (0.0..1.0).contains(&s) && (r > 0.0 || s > 0.0)
}

/// `n (n-1) ⋯ (n-a+1)`, with `n^0 = 1`.
pub fn falling_factorial(n: &BigInt, a: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n.clone();
    for _ in 0..a {
        if k.is_zero() {
            return BigInt::zero();
        }
        acc *= &k;
        k -= 1;
    }
    acc
}

fn ff(n: i64, a: u64) -> BigInt {
    falling_factorial(&BigInt::from(n), a)
}

fn ff_rational(n: i64, a: u64) -> BigRational {
    BigRational::from_integer(ff(n, a))
}

/// Which symmetry line carries the two fixed points of an even cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Line {
    G,
    H,
}

/// `⟨P_{2k-1}^{(s)}⟩ = ((2k-1)/N) · N^{2k-1} · #E(g-1, h-1, N-2k+1) / #E(g, h, N)`.
pub fn expected_p_sym_odd(params: &TheoryParams, k: u64) -> BigRational {
    if k == 0 || 2 * k - 1 > params.n || params.g == 0 || params.h == 0 {
        return BigRational::zero();
    }
    let t = 2 * k - 1;
    ratio(t, params.n) * ff_rational(params.n as i64, t) * params.pair_ratio(-(t as i64), -1, -1)
}

/// `⟨P_{2k,G}^{(s)}⟩ = (k/N) · N^{2k} · #E(g-2, h, N-2k) / #E(g, h, N)`; `Line::H` swaps the roles.
pub fn expected_p_sym_even(params: &TheoryParams, k: u64, line: Line) -> BigRational {
    let on_line = match line {
        Line::G => params.g,
        Line::H => params.h,
    };
    if k == 0 || 2 * k > params.n || on_line < 2 {
        return BigRational::zero();
    }
    let t = 2 * k;
    let (dg, dh) = match line {
        Line::G => (-2, 0),
        Line::H => (0, -2),
    };
    ratio(k, params.n) * ff_rational(params.n as i64, t) * params.pair_ratio(-(t as i64), dg, dh)
}

/// Mass on asymmetric `t`-cycles: `(N^{2t} / N) · #E(g, h, N-2t) / #E(g, h, N)`.
pub fn expected_p_asym(params: &TheoryParams, t: u64) -> BigRational {
    if t == 0 || 2 * t > params.n {
        return BigRational::zero();
    }
    ff_rational(params.n as i64, 2 * t) / ratio(params.n, 1) * params.pair_ratio(-2 * t as i64, 0, 0)
}

/// All symmetric mass at period `t`: the odd term, or both even lines.
pub fn expected_p_sym(params: &TheoryParams, t: u64) -> BigRational {
    if t == 0 {
        return BigRational::zero();
    }
    if t % 2 == 1 {
        expected_p_sym_odd(params, t.div_ceil(2))
    } else {
        expected_p_sym_even(params, t / 2, Line::G) + expected_p_sym_even(params, t / 2, Line::H)
    }
}

/// `⟨P_t⟩` including the asymmetric contribution.
pub fn expected_p_total(params: &TheoryParams, t: u64) -> BigRational {
    expected_p_sym(params, t) + expected_p_asym(params, t)
}

/// Exact `R_N(x) = Σ_{t ≤ ⌊x z⌋} ⟨P_t⟩`.
pub fn r_exact(params: &TheoryParams, x: &BigRational) -> BigRational {
    let tmax = (x * &params.z).floor().to_integer().to_u64().unwrap_or(0).min(params.n);
    (1..=tmax).map(|t| expected_p_total(params, t)).fold(BigRational::zero(), |a, b| a + b)
}

/// Product form of the odd symmetric mass.
pub fn p_sym_odd_product(params: &TheoryParams, k: u64) -> BigRational {
    let (n, g, h) = (params.n as i64, params.g as i64, params.h as i64);
    if k == 0 || 2 * k as i64 - 1 > n {
        return BigRational::zero();
    }
    let t = 2 * k - 1;
    let weight = if k == 1 {
        BigRational::new(BigInt::from(g * h), BigInt::from(n * n))
    } else {
        let mut num = BigInt::from(g * h);
        for j in 0..(k as i64 - 1) {
            num *= (n - g - 2 * j) * (n - h - 2 * j);
        }
        let d = ff(n, t);
        BigRational::new(num, &d * &d)
    };
    ratio(t, params.n) * ff_rational(n, t) * weight
}

fn even_product_numerator(params: &TheoryParams, k: u64, line: Line) -> BigInt {
    let (n, mut a, mut b) = (params.n as i64, params.g as i64, params.h as i64);
    if line == Line::H {
        std::mem::swap(&mut a, &mut b);
    }
    let mut num = BigInt::from(a * (a - 1));
    for j in 0..(k as i64 - 1) {
        num *= n - a - 2 * j;
    }
    for j in 0..k as i64 {
        num *= n - b - 2 * j;
    }
    num
}

/// Product form of the even symmetric mass:
/// `(k/N) · N^{2k} · g(g-1) Π_{j<k-1}(N-g-2j) Π_{j<k}(N-h-2j) / (N^{2k})²`.
pub fn p_sym_even_product(params: &TheoryParams, k: u64, line: Line) -> BigRational {
    if k == 0 || 2 * k > params.n {
        return BigRational::zero();
    }
    let d = ff(params.n as i64, 2 * k);
    let weight = BigRational::new(even_product_numerator(params, k, line), &d * &d);
    ratio(k, params.n) * ff_rational(params.n as i64, 2 * k) * weight
}

/// The even product form with an unsquared `N^{2k}` denominator, and with
/// `N(N-1)²` in place of `(N(N-1))²` at `k = 1`. It disagrees with
/// [`expected_p_sym_even`]; kept to report where.
pub fn p_sym_even_unsquared_form(params: &TheoryParams, k: u64, line: Line) -> BigRational {
    if k == 0 || 2 * k > params.n {
        return BigRational::zero();
    }
    let n = params.n as i64;
    let weight = if k == 1 {
        let (a, b) = match line {
            Line::G => (params.g as i64, params.h as i64),
            Line::H => (params.h as i64, params.g as i64),
        };
        BigRational::new(BigInt::from(a * (a - 1) * (n - b)), BigInt::from(n * (n - 1) * (n - 1)))
    } else {
        BigRational::new(even_product_numerator(params, k, line), ff(n, 2 * k))
    };
    ratio(k, params.n) * ff_rational(n, 2 * k) * weight
}

/// Product form of the asymmetric mass, `(1/N) Π_{j<t} (1 - (g-1)/(N-2j-1)) (1 - h/(N-2j))`.
pub fn p_asym_product(params: &TheoryParams, t: u64) -> BigRational {
    if t == 0 || 2 * t > params.n {
        return BigRational::zero();
    }
    ratio(1, params.n) * survival_product(params.n, params.g, params.h, t)
}

/// `Π_{j<m} (1 - (g-1)/(N-2j-1)) (1 - h/(N-2j))`.
fn survival_product(n: u64, g: u64, h: u64, m: u64) -> BigRational {
    let (n, g, h) = (n as i64, g as i64, h as i64);
    let mut acc = BigRational::one();
    for j in 0..m as i64 {
        let a = BigRational::one() - BigRational::new(BigInt::from(g - 1), BigInt::from(n - 2 * j - 1));
        let b = BigRational::one() - BigRational::new(BigInt::from(h), BigInt::from(n - 2 * j));
        acc = acc * a * b;
    }
    acc
}

/// `R(x) = 1 - e^{-x}(1 + x)`.
pub fn r_limit(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::InvalidArgument(format!("R(x) needs x >= 0, got {x}")));
    }
    // -expm1 keeps precision near 0.
    Ok(-(-x).exp_m1() - x * (-x).exp())
}

/// Weighted count of ways to place `m` symmetric `t`-cycles, divided by `#E(g, h, N)`:
/// the factor multiplying `N^{mt}/m!` in the expected number of `m`-sets.
fn symmetric_set_weight(params: &TheoryParams, t: u64, m: u64) -> BigRational {
    let rest = params.n as i64 - (m * t) as i64;
    if rest < 0 {
        return BigRational::zero();
    }
    let m = m as i64;
    if t % 2 == 1 {
        return params.pair_ratio(-(params.n as i64 - rest), -m, -m);
    }
    // Even cycles: `a` of them on Fix G and `m - a` on Fix H; each is traced
    // from either of its two line points.
    let mut acc = BigRational::zero();
    let mut binom = BigInt::one();
    for a in 0..=m {
        if a > 0 {
            binom = binom * (m - a + 1) / a;
        }
        let e = pair_count_or_zero(rest, params.g as i64 - 2 * a, params.h as i64 - 2 * (m - a));
        acc += BigRational::from_integer(&binom * BigInt::from(e));
    }
    acc / (BigRational::from_integer(BigInt::one() << m as usize) * params.pairs())
}

/// Variant where an `m`-set of even cycles lies entirely on one line,
/// `½(#E(g-2m, h, ·) + #E(g, h-2m, ·))`. Matches [`symmetric_set_weight`] for `m <= 1` only.
fn single_line_set_weight(params: &TheoryParams, t: u64, m: u64) -> BigRational {
    let rest = params.n as i64 - (m * t) as i64;
    if t % 2 == 1 || rest < 0 {
        return symmetric_set_weight(params, t, m);
    }
    if m == 0 {
        return BigRational::one();
    }
    let m = m as i64;
    let e = pair_count_or_zero(rest, params.g as i64 - 2 * m, params.h as i64)
        + pair_count_or_zero(rest, params.g as i64, params.h as i64 - 2 * m);
    to_rational(e) / (BigRational::from_integer(BigInt::from(2)) * params.pairs())
}

fn mu_with(params: &TheoryParams, t: u64, i: u64, weight: impl Fn(&TheoryParams, u64, u64) -> BigRational) -> BigRational {
    if t == 0 || i * t > params.n {
        return BigRational::zero();
    }
    let n = params.n as i64;
    let it = (i * t) as i64;
    let max_extra = params.n / t - i;
    let mut sum = BigRational::zero();
    let mut n_fact = BigInt::one();
    for extra in 0..=max_extra {
        if extra > 0 {
            n_fact *= extra;
        }
        let w = weight(params, t, i + extra);
        if w.is_zero() {
            continue;
        }
        let term = BigRational::new(ff(n - it, extra * t), n_fact.clone()) * w;
        if extra % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    BigRational::new(ff(n, i * t), BigInt::from(factorial(i))) * sum
}

/// Probability that a uniform pair of `E(g, h, N)` has exactly `i` symmetric
/// `t`-cycles, by inclusion-exclusion over sets of symmetric `t`-cycles.
pub fn mu_exact(params: &TheoryParams, t: u64, i: u64) -> BigRational {
    mu_with(params, t, i, symmetric_set_weight)
}

/// [`mu_exact`] with even cycle sets restricted to a single line; reported
/// against enumeration, never used as ground truth.
pub fn mu_single_line_form(params: &TheoryParams, t: u64, i: u64) -> BigRational {
    mu_with(params, t, i, single_line_set_weight)
}

/// Odd-period `μ` as `(1/i!) Σ_n ((-1)^n/n!) A(i,n) B(i,n)` with
/// `A = g^{m} h^{m} / (N - m(t-1))^{m}` and `B` the survival product over `m(t-1)/2` steps, `m = i+n`.
pub fn mu_odd_product(params: &TheoryParams, t: u64, i: u64) -> BigRational {
    assert!(t % 2 == 1, "product form covers odd periods");
    if i * t > params.n {
        return BigRational::zero();
    }
    let (n, g, h) = (params.n as i64, params.g as i64, params.h as i64);
    let mut sum = BigRational::zero();
    let mut n_fact = BigInt::one();
    for extra in 0..=(params.n / t - i) {
        if extra > 0 {
            n_fact *= extra;
        }
        let m = i + extra;
        let base = n - (m * (t - 1)) as i64;
        let den = ff(base, m);
        if den.is_zero() {
            continue;
        }
        let a = BigRational::new(ff(g, m) * ff(h, m), den);
        let b = survival_product(params.n, params.g, params.h, m * (t - 1) / 2);
        let term = a * b / BigRational::from_integer(n_fact.clone());
        if extra % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum / BigRational::from_integer(BigInt::from(factorial(i)))
}

/// `e^{-α} α^i / i!`.
pub fn mu_poisson(alpha: f64, i: u64) -> f64 {
    if alpha == 0.0 {
        return if i == 0 { 1.0 } else { 0.0 };
    }
    let log = -alpha + i as f64 * alpha.ln() - ln_factorial(i);
    log.exp()
}

fn ln_factorial(i: u64) -> f64 {
    (2..=i).map(|k| (k as f64).ln()).sum()
}

/// Probability that a uniform permutation of `d` objects has exactly `i`
/// fixed points: `(1/i!) Σ_{j ≤ d-i} (-1)^j / j!`.
pub fn cebotarev_nu(d: u64, i: u64) -> BigRational {
    if i > d {
        return BigRational::zero();
    }
    let mut sum = BigRational::zero();
    let mut jf = BigInt::one();
    for j in 0..=(d - i) {
        if j > 0 {
            jf *= j;
        }
        let term = BigRational::new(BigInt::one(), jf.clone());
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum / BigRational::from_integer(BigInt::from(factorial(i)))
}

/// `(t/N) Σ_i i·μ(t, i)`.
pub fn reconstruct_p_from_mu(params: &TheoryParams, t: u64) -> BigRational {
    if t == 0 || t > params.n {
        return BigRational::zero();
    }
    let expected_count = (1..=params.n / t)
        .map(|i| mu_exact(params, t, i) * BigRational::from_integer(BigInt::from(i)))
        .fold(BigRational::zero(), |a, b| a + b);
    ratio(t, params.n) * expected_count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u64, g: u64, h: u64) -> TheoryParams {
        TheoryParams::new(n, g, h).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn params_identities() {
        let p = params(40_000, 200, 200);
        assert_eq!(&p.z * &p.kappa, q(2, 1));
        assert_eq!(p.z, q(200, 1));
        assert_eq!(p.f_odd, q(1, 1));
        assert!(TheoryParams::new(5, 2, 2).is_err());
        assert!(TheoryParams::new(4, 0, 0).is_err());
    }

    #[test]
    fn repetition_alpha_identity() {
        for (n, g, h, t) in [(10_000, 100, 100, 3), (10_000, 200, 50, 7), (4000, 30, 10, 6)] {
            let r = params(n, g, h).repetition(t);
            assert!((r.alpha - r.f * (-r.x).exp()).abs() < 1e-12 * r.alpha.max(1.0));
        }
        let r = params(10_000, 100, 100).repetition(1);
        assert_eq!(r.x, 0.0);
        assert!((r.alpha - 1.0).abs() < 1e-15);
    }

    #[test]
    fn falling_factorial_examples() {
        let five = BigInt::from(5);
        assert_eq!(falling_factorial(&five, 0), BigInt::one());
        assert_eq!(falling_factorial(&five, 2), BigInt::from(20));
        assert_eq!(falling_factorial(&BigInt::from(4), 5), BigInt::zero());
    }

    #[test]
    fn odd_examples() {
        assert_eq!(expected_p_sym_odd(&params(4, 2, 2), 1), q(1, 4));
        assert_eq!(expected_p_sym_odd(&params(4, 2, 2), 2), q(1, 2));
        assert!(expected_p_sym_odd(&params(6, 0, 2), 1).is_zero());
    }

    #[test]
    fn even_examples() {
        assert_eq!(expected_p_sym_even(&params(2, 2, 0), 1, Line::G), q(1, 1));
        assert!(expected_p_sym_even(&params(2, 0, 2), 1, Line::G).is_zero());
        assert_eq!(expected_p_sym_even(&params(2, 0, 2), 1, Line::H), q(1, 1));
    }

    #[test]
    fn asym_examples() {
        // g = h = 0 has no scaling z; build the ratio directly.
        let p = TheoryParams { n: 2, g: 0, h: 0, z: q(0, 1), kappa: q(0, 1), f_odd: q(0, 1), f_even: q(0, 1) };
        assert_eq!(expected_p_asym(&p, 1), q(1, 1));
        assert!(expected_p_asym(&params(2, 2, 2), 1).is_zero());
    }

    #[test]
    fn product_forms_agree_with_ratios() {
        for n in 1..=12u64 {
            for (g, h) in crate::sampler::admissible_fixed_counts(n) {
                if g + h == 0 {
                    continue;
                }
                let p = params(n, g, h);
                for k in 1..=n.div_ceil(2) {
                    assert_eq!(expected_p_sym_odd(&p, k), p_sym_odd_product(&p, k), "odd N={n} g={g} h={h} k={k}");
                }
                for k in 1..=n / 2 {
                    for line in [Line::G, Line::H] {
                        let on_line = if line == Line::G { g } else { h };
                        if on_line >= 2 {
                            assert_eq!(expected_p_sym_even(&p, k, line), p_sym_even_product(&p, k, line));
                        }
                    }
                }
                for t in 1..=n / 2 {
                    assert_eq!(expected_p_asym(&p, t), p_asym_product(&p, t), "asym N={n} g={g} h={h} t={t}");
                }
            }
        }
    }

    #[test]
    fn unsquared_even_form_disagrees() {
        let p = params(2, 2, 0);
        assert_eq!(expected_p_sym_even(&p, 1, Line::G), q(1, 1));
        assert_eq!(p_sym_even_unsquared_form(&p, 1, Line::G), q(2, 1));
    }

    #[test]
    fn normalization() {
        for n in 1..=10u64 {
            for (g, h) in crate::sampler::admissible_fixed_counts(n) {
                if g + h == 0 {
                    continue;
                }
                let p = params(n, g, h);
                let total = (1..=n).map(|t| expected_p_total(&p, t)).fold(BigRational::zero(), |a, b| a + b);
                assert!(total.is_one(), "N={n} g={g} h={h}: {total}");
                let big_x = BigRational::from_integer(BigInt::from(n));
                assert!(r_exact(&p, &big_x).is_one());
            }
        }
    }

    #[test]
    fn r_limit_examples() {
        assert_eq!(r_limit(0.0).unwrap(), 0.0);
        assert!((r_limit(1.0).unwrap() - (1.0 - 2.0 / std::f64::consts::E)).abs() < 1e-15);
        assert!((r_limit(1.0).unwrap() - 0.264241).abs() < 1e-6);
        assert!((1.0 - r_limit(50.0).unwrap()).abs() < 1e-15);
        assert!(r_limit(-0.1).is_err());
        assert!(r_limit(f64::NAN).is_err());
    }

    #[test]
    fn r_limit_monotone() {
        let mut prev = 0.0;
        for k in 0..=2000 {
            let v = r_limit(k as f64 * 0.01).unwrap();
            assert!(v >= prev && v <= 1.0);
            prev = v;
        }
    }

    #[test]
    fn mu_examples() {
        let p = params(2, 2, 2);
        assert!(mu_exact(&p, 1, 2).is_one());
        assert!(mu_exact(&p, 1, 0).is_zero());
        assert!(mu_exact(&p, 1, 1).is_zero());
        let p = params(6, 2, 2);
        let total = (0..=2).map(|i| mu_exact(&p, 3, i)).fold(BigRational::zero(), |a, b| a + b);
        assert!(total.is_one());
    }

    #[test]
    fn mu_sums_to_one_and_reconstructs_p() {
        for n in 1..=8u64 {
            for (g, h) in crate::sampler::admissible_fixed_counts(n) {
                if g + h == 0 {
                    continue;
                }
                let p = params(n, g, h);
                for t in 1..=n {
                    let total = (0..=n / t).map(|i| mu_exact(&p, t, i)).fold(BigRational::zero(), |a, b| a + b);
                    assert!(total.is_one(), "N={n} g={g} h={h} t={t}: {total}");
                    assert_eq!(reconstruct_p_from_mu(&p, t), expected_p_sym(&p, t));
                    if t % 2 == 1 {
                        for i in 0..=n / t {
                            assert_eq!(mu_odd_product(&p, t, i), mu_exact(&p, t, i));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reconstruct_examples() {
        assert!(reconstruct_p_from_mu(&params(2, 2, 2), 1).is_one());
        assert_eq!(reconstruct_p_from_mu(&params(4, 2, 2), 1), q(1, 4));
        assert_eq!(reconstruct_p_from_mu(&params(4, 2, 2), 3), q(1, 2));
    }

    #[test]
    fn single_line_form_differs_only_with_two_even_cycles() {
        let p = params(8, 4, 4);
        for i in 0..=4 {
            assert_eq!(mu_single_line_form(&p, 1, i), mu_exact(&p, 1, i));
        }
        let diff = (0..=4).filter(|&i| mu_single_line_form(&p, 2, i) != mu_exact(&p, 2, i)).count();
        assert!(diff > 0);
    }

    #[test]
    fn poisson_examples() {
        let e = (-1.0f64).exp();
        assert!((mu_poisson(1.0, 0) - e).abs() < 1e-15);
        assert!((mu_poisson(1.0, 0) - 0.367879).abs() < 1e-6);
        assert!((mu_poisson(1.0, 1) - e).abs() < 1e-15);
        assert!((mu_poisson(2.0, 2) - 2.0 * (-2.0f64).exp()).abs() < 1e-15);
        assert!((mu_poisson(2.0, 2) - 0.270671).abs() < 1e-6);
        for alpha in [0.01, 0.5, 1.0, 3.0, 10.0] {
            let s: f64 = (0..200).map(|i| mu_poisson(alpha, i)).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cebotarev_table() {
        let expected = [q(53, 144), q(11, 30), q(3, 16), q(1, 18), q(1, 48), q(0, 1), q(1, 720)];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(&cebotarev_nu(6, i as u64), e, "i={i}");
        }
        assert!(cebotarev_nu(6, 7).is_zero());
        let total = (0..=6).map(|i| cebotarev_nu(6, i)).fold(BigRational::zero(), |a, b| a + b);
        assert!(total.is_one());
    }

    #[test]
    fn growth_regimes() {
        assert_eq!(f_growth_regime(0.5, 0.5, 3), GrowthRegime::Constant);
        assert_eq!(f_growth_regime(0.5, 0.5, 4), GrowthRegime::Constant);
        assert_eq!(f_growth_regime(2.0 / 3.0, 1.0 / 3.0, 5), GrowthRegime::Constant);
        assert_eq!(f_growth_regime(2.0 / 3.0, 1.0 / 3.0, 4), GrowthRegime::Diverging);
        assert_eq!(f_growth_regime(0.3, 0.3, 1), GrowthRegime::Vanishing);
        assert!(growth_conditions_hold(0.5, 0.0));
        assert!(!growth_conditions_hold(0.0, 0.0));
        assert!(!growth_conditions_hold(1.0, 0.5));
    }
}
