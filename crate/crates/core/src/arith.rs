//! Scalar arithmetic: the prime field F_p, binomial coefficients mod p, and
//! integer polynomials in `q` together with cyclotomic factorization.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime number used as the characteristic of the coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub const DEFAULT_BOUND: u32 = 97;

    /// Accepts primes up to [`Prime::DEFAULT_BOUND`].
    pub fn new(p: u32) -> Result<Self> {
        Self::with_bound(p, Self::DEFAULT_BOUND)
    }

    pub fn with_bound(p: u32, bound: u32) -> Result<Self> {
        if p < 2 || !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        if p > bound {
            return Err(Error::Domain(format!("prime {p} exceeds the configured bound {bound}")));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub(crate) fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub(crate) fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub(crate) fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub(crate) fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub(crate) fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero residue (Fermat).
    pub(crate) fn inv(self, a: u32) -> u32 {
        debug_assert!(!a.is_multiple_of(self.0), "inverse of zero");
        self.pow(a, self.0 as u64 - 2)
    }

    /// `(-1)^k` as a residue.
    #[inline]
    pub(crate) fn sign(self, k: u64) -> u32 {
        if k.is_multiple_of(2) {
            1 % self.0
        } else {
            self.0 - 1
        }
    }
}

impl TryFrom<u32> for Prime {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u32,
    prime: Prime,
}

impl FpScalar {
    pub fn new(value: i64, prime: Prime) -> Self {
        FpScalar { value: prime.reduce(value), prime }
    }

    pub fn zero(prime: Prime) -> Self {
        FpScalar { value: 0, prime }
    }

    pub fn one(prime: Prime) -> Self {
        FpScalar { value: 1, prime }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn prime(self) -> Prime {
        self.prime
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Inverse of a nonzero scalar; `None` for zero.
    pub fn inverse(self) -> Option<Self> {
        if self.value == 0 {
            None
        } else {
            Some(FpScalar { value: self.prime.inv(self.value), prime: self.prime })
        }
    }

    pub fn pow(self, exp: u64) -> Self {
        FpScalar { value: self.prime.pow(self.value, exp), prime: self.prime }
    }

    /// The representative in `(-p/2, p/2]`, useful for reporting signs.
    pub fn symmetric_lift(self) -> i64 {
        let p = self.prime.get() as i64;
        let v = self.value as i64;
        if 2 * v > p {
            v - p
        } else {
            v
        }
    }
}

impl Add for FpScalar {
    type Output = FpScalar;
    fn add(self, rhs: FpScalar) -> FpScalar {
        debug_assert_eq!(self.prime, rhs.prime);
        FpScalar { value: self.prime.add(self.value, rhs.value), prime: self.prime }
    }
}

impl Sub for FpScalar {
    type Output = FpScalar;
    fn sub(self, rhs: FpScalar) -> FpScalar {
        debug_assert_eq!(self.prime, rhs.prime);
        FpScalar { value: self.prime.sub(self.value, rhs.value), prime: self.prime }
    }
}

impl Mul for FpScalar {
    type Output = FpScalar;
    fn mul(self, rhs: FpScalar) -> FpScalar {
        debug_assert_eq!(self.prime, rhs.prime);
        FpScalar { value: self.prime.mul(self.value, rhs.value), prime: self.prime }
    }
}

impl Neg for FpScalar {
    type Output = FpScalar;
    fn neg(self) -> FpScalar {
        FpScalar { value: self.prime.neg(self.value), prime: self.prime }
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Binomial coefficient `C(n, k)` reduced mod p.
///
/// Negative `n` uses `C(n, k) = (-1)^k C(k - n - 1, k)`; non-negative `n` goes
/// through Lucas' theorem digit by digit.
pub fn binomial_mod_p(n: i64, k: i64, p: Prime) -> Result<FpScalar> {
    if k < 0 {
        return Err(Error::Domain(format!("binomial with negative lower index {k}")));
    }
    Ok(FpScalar { value: binomial_raw(n, k as u64, p), prime: p })
}

pub(crate) fn binomial_raw(n: i64, k: u64, p: Prime) -> u32 {
    if n < 0 {
        let upper = (k as i64) - n - 1;
        let c = lucas(upper as u64, k, p);
        return p.mul(p.sign(k), c);
    }
    lucas(n as u64, k, p)
}

fn lucas(mut n: u64, mut k: u64, p: Prime) -> u32 {
    let pp = p.get() as u64;
    let mut acc = 1 % p.get();
    while k > 0 || n > 0 {
        let (nd, kd) = (n % pp, k % pp);
        if kd > nd {
            return 0;
        }
        acc = p.mul(acc, small_binomial(nd as u32, kd as u32, p));
        if acc == 0 {
            return 0;
        }
        n /= pp;
        k /= pp;
    }
    acc
}

// n, k < p so the factorials are invertible.
fn small_binomial(n: u32, k: u32, p: Prime) -> u32 {
    let k = k.min(n - k);
    let mut num = 1 % p.get();
    let mut den = 1 % p.get();
    for j in 0..k {
        num = p.mul(num, n - j);
        den = p.mul(den, j + 1);
    }
    p.mul(num, p.inv(den))
}

/// Coefficient of `x^k` in `(1 + x + ... + x^{p-1})^n`, reduced mod p.
///
/// Computed by truncated repeated squaring of the truncated series.
pub fn generalized_binomial(n: u64, k: u64, p: Prime) -> FpScalar {
    if k > n * (p.get() as u64 - 1) {
        return FpScalar::zero(p);
    }
    let len = k as usize + 1;
    let base: Vec<u32> = (0..len).map(|i| if i < p.get() as usize { 1 } else { 0 }).collect();
    let mut result = vec![0u32; len];
    result[0] = 1 % p.get();
    let mut power = base;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = truncated_product(&result, &power, p);
        }
        e >>= 1;
        if e > 0 {
            power = truncated_product(&power, &power, p);
        }
    }
    FpScalar { value: result[k as usize], prime: p }
}

fn truncated_product(a: &[u32], b: &[u32], p: Prime) -> Vec<u32> {
    let len = a.len();
    let mut out = vec![0u32; len];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(len - i) {
            if bj != 0 {
                out[i + j] = p.add(out[i + j], p.mul(ai, bj));
            }
        }
    }
    out
}

/// A polynomial in `q` with arbitrary-precision integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPolynomial {
    coeffs: BTreeMap<u32, BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c * q^d`
    pub fn monomial(c: impl Into<BigInt>, d: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(d, c.into());
        p
    }

    /// Builds from a dense coefficient list, lowest degree first.
    pub fn from_coeffs<I, C>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = C>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (d, c) in coeffs.into_iter().enumerate() {
            p.add_term(d as u32, c.into());
        }
        p
    }

    fn add_term(&mut self, d: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(d).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&d);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the leading term; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coefficient(&self, d: u32) -> BigInt {
        self.coeffs.get(&d).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigInt)> {
        self.coeffs.iter().map(|(d, c)| (*d, c))
    }

    /// Dense coefficient list from degree 0 to the leading degree.
    pub fn dense_coeffs(&self) -> Vec<BigInt> {
        match self.degree() {
            None => Vec::new(),
            Some(top) => (0..=top).map(|d| self.coefficient(d)).collect(),
        }
    }

    /// Exact division; fails when the remainder is nonzero or a quotient
    /// coefficient is not integral.
    pub fn div_exact(&self, divisor: &IntPolynomial) -> Result<IntPolynomial> {
        let dd = divisor.degree().ok_or_else(|| Error::Domain("division by zero polynomial".into()))?;
        let lead = divisor.coefficient(dd);
        let mut rem = self.clone();
        let mut quot = IntPolynomial::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                return Err(Error::NotDivisible);
            }
            let (q, r) = rem.coefficient(rd).div_rem(&lead);
            if !r.is_zero() {
                return Err(Error::NotDivisible);
            }
            let shift = rd - dd;
            for (d, c) in divisor.terms() {
                rem.add_term(d + shift, -(c * &q));
            }
            quot.add_term(shift, q);
        }
        Ok(quot)
    }
}

impl Add<&IntPolynomial> for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let mut out = self.clone();
        for (d, c) in rhs.terms() {
            out.add_term(d, c.clone());
        }
        out
    }
}

impl Sub<&IntPolynomial> for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let mut out = self.clone();
        for (d, c) in rhs.terms() {
            out.add_term(d, -c.clone());
        }
        out
    }
}

impl Mul<&IntPolynomial> for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        let mut out = IntPolynomial::zero();
        for (da, ca) in self.terms() {
            for (db, cb) in rhs.terms() {
                out.add_term(da + db, ca * cb);
            }
        }
        out
    }
}

/// Serialized as its rendered string.
impl Serialize for IntPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Renders lowest degree first without spaces, e.g. `1+q^2` or `-1+q`.
impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (d, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if negative {
                write!(f, "-")?;
            } else if i > 0 {
                write!(f, "+")?;
            }
            match d {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if d == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{d}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// The cyclotomic polynomial `Φ_d(q)`, obtained by dividing `q^d - 1` by
/// `Φ_e` for every proper divisor `e` of `d`.
pub fn cyclotomic(d: u32) -> IntPolynomial {
    assert!(d >= 1, "cyclotomic polynomials are indexed from 1");
    let mut poly = &IntPolynomial::monomial(1, d) - &IntPolynomial::one();
    for e in divisors(d) {
        if e == d {
            continue;
        }
        poly = poly
            .div_exact(&cyclotomic(e))
            .expect("Φ_e divides q^d - 1 for e | d");
    }
    poly
}

/// Positive divisors in increasing order.
pub fn divisors(n: u32) -> Vec<u32> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `(1 - q^m) / (1 - q^k)` for `k | m`, as an exact polynomial.
pub fn q_quotient(numerator_exp: u32, denominator_exp: u32) -> Result<IntPolynomial> {
    if denominator_exp == 0 || !numerator_exp.is_multiple_of(denominator_exp) {
        return Err(Error::Domain(format!(
            "{denominator_exp} does not divide {numerator_exp}"
        )));
    }
    let num = &IntPolynomial::one() - &IntPolynomial::monomial(1, numerator_exp);
    let den = &IntPolynomial::one() - &IntPolynomial::monomial(1, denominator_exp);
    num.div_exact(&den)
}

/// Factors `(1 - q^m) / (1 - q^k)` into cyclotomic polynomials.
///
/// Returns the pairs `(d, multiplicity)` with `d | m`, `d ∤ k`; every
/// multiplicity is 1. The product is checked against the exact quotient.
pub fn factor_quotient(numerator_exp: u32, denominator_exp: u32) -> Result<Vec<(u32, u32)>> {
    if numerator_exp == 0 || denominator_exp == 0 {
        return Err(Error::Domain("exponents must be positive".into()));
    }
    let quotient = q_quotient(numerator_exp, denominator_exp)?;
    let factors: Vec<(u32, u32)> = divisors(numerator_exp)
        .into_iter()
        .filter(|d| !denominator_exp.is_multiple_of(*d))
        .map(|d| (d, 1))
        .collect();
    let product = factors
        .iter()
        .fold(IntPolynomial::one(), |acc, (d, _)| &acc * &cyclotomic(*d));
    if product != quotient {
        return Err(Error::Structure(format!(
            "cyclotomic product does not reproduce (1-q^{numerator_exp})/(1-q^{denominator_exp})"
        )));
    }
    Ok(factors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u32) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn prime_validation() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(97).is_ok());
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(9).is_err());
        assert!(Prime::new(101).is_err());
        assert!(Prime::with_bound(101, 200).is_ok());
    }

    #[test]
    fn scalar_field_ops() {
        let q = p(7);
        let a = FpScalar::new(3, q);
        let b = FpScalar::new(-2, q);
        assert_eq!((a + b).value(), 1);
        assert_eq!((a * b).value(), 1);
        assert_eq!((a - b).value(), 5);
        assert_eq!((-a).value(), 4);
        assert_eq!((a * a.inverse().unwrap()).value(), 1);
        assert!(FpScalar::zero(q).inverse().is_none());
        assert_eq!(FpScalar::new(6, q).symmetric_lift(), -1);
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial_mod_p(5, 2, p(3)).unwrap().value(), 1);
        for n in [-4, 0, 3, 17] {
            assert_eq!(binomial_mod_p(n, 0, p(5)).unwrap().value(), 1);
        }
        assert_eq!(binomial_mod_p(1, 2, p(5)).unwrap().value(), 0);
        assert!(binomial_mod_p(3, -1, p(5)).is_err());
    }

    #[test]
    fn negative_upper_index() {
        // C(-1, k) = (-1)^k
        for k in 0..6 {
            let v = binomial_mod_p(-1, k, p(5)).unwrap().symmetric_lift();
            assert_eq!(v, if k % 2 == 0 { 1 } else { -1 });
        }
        // C(-2, 3) = -4
        assert_eq!(binomial_mod_p(-2, 3, p(7)).unwrap().value(), 3);
    }

    #[test]
    fn generalized_binomial_examples() {
        for q in [2, 3, 5, 7] {
            assert_eq!(generalized_binomial(1, q as u64 - 1, p(q)).value(), 1);
        }
        assert_eq!(generalized_binomial(2, 2, p(3)).value(), 0);
        assert_eq!(generalized_binomial(3, 5, p(2)).value(), 0);
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic(1), IntPolynomial::from_coeffs([-1, 1]));
        assert_eq!(cyclotomic(4), IntPolynomial::from_coeffs([1, 0, 1]));
        for q in [2u32, 3, 5, 7, 11] {
            assert_eq!(cyclotomic(q), IntPolynomial::from_coeffs(vec![1; q as usize]));
        }
        assert_eq!(cyclotomic(1).to_string(), "-1+q");
    }

    #[test]
    fn factor_quotient_examples() {
        assert_eq!(factor_quotient(4, 2).unwrap(), vec![(4, 1)]);
        assert_eq!(factor_quotient(12, 4).unwrap(), vec![(3, 1), (6, 1), (12, 1)]);
        assert_eq!(factor_quotient(9, 9).unwrap(), vec![]);
        assert!(factor_quotient(12, 5).is_err());
    }

    #[test]
    fn div_exact_rejects_remainder() {
        let a = IntPolynomial::from_coeffs([1, 0, 1]);
        let b = IntPolynomial::from_coeffs([1, 1]);
        assert_eq!(a.div_exact(&b), Err(Error::NotDivisible));
        let c = IntPolynomial::from_coeffs([1, 2]);
        let twice = &c * &IntPolynomial::from_coeffs([3, 2]);
        assert_eq!(twice.div_exact(&IntPolynomial::from_coeffs([3, 2])).unwrap(), c);
    }

    #[test]
    fn int_polynomial_rendering() {
        assert_eq!(IntPolynomial::from_coeffs([1, 0, 1]).to_string(), "1+q^2");
        assert_eq!(IntPolynomial::from_coeffs([0, -2, 3]).to_string(), "-2*q+3*q^2");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }
}
