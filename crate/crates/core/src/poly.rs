//! Sparse polynomials over F_p in `n` commuting variables of degree 2.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith::{FpScalar, Prime};
use crate::error::{Error, Result};

/// Exponent vector of a monomial `x_1^{a_1} ... x_n^{a_n}`.
///
/// Ordered graded-lexicographically: total exponent first, then the exponent
/// of `x_1`, then `x_2`, and so on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(num_vars: usize) -> Self {
        Monomial(vec![0; num_vars])
    }

    /// `x_i` with 1-based `i`.
    pub fn var(num_vars: usize, i: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[i - 1] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    pub fn total_exponent(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Grading degree, `2 * Σ a_i`.
    pub fn degree(&self) -> u32 {
        2 * self.total_exponent()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    /// Exchanges the exponents of `x_j` and `x_{j+1}` (1-based `j`).
    pub fn swapped(&self, j: usize) -> Monomial {
        let mut e = self.0.clone();
        e.swap(j - 1, j);
        Monomial(e)
    }

    /// All monomials in `num_vars` variables with the given total exponent,
    /// in increasing order.
    pub fn with_total_exponent(num_vars: usize, total: u32) -> Vec<Monomial> {
        fn rec(slot: usize, remaining: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if slot + 1 == cur.len() {
                cur[slot] = remaining;
                out.push(Monomial(cur.clone()));
                return;
            }
            for a in 0..=remaining {
                cur[slot] = a;
                rec(slot + 1, remaining - a, cur, out);
            }
        }
        if num_vars == 0 {
            return if total == 0 { vec![Monomial(Vec::new())] } else { Vec::new() };
        }
        let mut out = Vec::new();
        rec(0, total, &mut vec![0; num_vars], &mut out);
        out
    }

    /// All monomials whose grading degree is at most `degree_bound`.
    pub fn up_to_degree(num_vars: usize, degree_bound: u32) -> Vec<Monomial> {
        (0..=degree_bound / 2)
            .flat_map(|t| Monomial::with_total_exponent(num_vars, t))
            .collect()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_exponent()
            .cmp(&other.total_exponent())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `F_p[x_1, ..., x_n]` with `|x_i| = 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    prime: Prime,
    num_vars: usize,
    terms: BTreeMap<Monomial, u32>,
}

impl Polynomial {
    pub fn zero(prime: Prime, num_vars: usize) -> Self {
        Polynomial { prime, num_vars, terms: BTreeMap::new() }
    }

    pub fn constant(prime: Prime, num_vars: usize, c: i64) -> Self {
        Self::from_monomial(prime, Monomial::one(num_vars), c)
    }

    pub fn one(prime: Prime, num_vars: usize) -> Self {
        Self::constant(prime, num_vars, 1)
    }

    /// The variable `x_i`, 1-based.
    pub fn var(prime: Prime, num_vars: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= num_vars, "variable x{i} out of range for {num_vars} variables");
        Self::from_monomial(prime, Monomial::var(num_vars, i), 1)
    }

    pub fn from_monomial(prime: Prime, monomial: Monomial, c: i64) -> Self {
        let mut p = Self::zero(prime, monomial.num_vars());
        p.add_term(monomial, prime.reduce(c));
        p
    }

    pub fn from_terms<I>(prime: Prime, num_vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, i64)>,
    {
        let mut p = Self::zero(prime, num_vars);
        for (e, c) in terms {
            assert_eq!(e.len(), num_vars, "exponent vector has wrong length");
            p.add_term(Monomial(e), prime.reduce(c));
        }
        p
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, FpScalar)> + '_ {
        self.terms.iter().map(move |(m, &c)| (m, FpScalar::new(c as i64, self.prime)))
    }

    pub(crate) fn raw_terms(&self) -> impl Iterator<Item = (&Monomial, u32)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> FpScalar {
        FpScalar::new(self.terms.get(m).copied().unwrap_or(0) as i64, self.prime)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        debug_assert_eq!(m.num_vars(), self.num_vars);
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot = self.prime.add(*slot, c);
                if *slot == 0 {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn check_compatible(&self, other: &Polynomial) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::Mismatch(format!("primes {} and {}", self.prime, other.prime)));
        }
        if self.num_vars != other.num_vars {
            return Err(Error::Mismatch(format!(
                "{} and {} variables",
                self.num_vars, other.num_vars
            )));
        }
        Ok(())
    }

    fn assert_compatible(&self, other: &Polynomial) {
        if let Err(e) = self.check_compatible(other) {
            panic!("{e}");
        }
    }

    /// Largest grading degree of a term, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// The common degree of all terms, or `None` if the polynomial is zero or
    /// inhomogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.degree()?;
        self.is_homogeneous().then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, FpScalar)> {
        self.terms().next_back()
    }

    pub fn scale(&self, c: FpScalar) -> Polynomial {
        self.scale_raw(c.value())
    }

    pub(crate) fn scale_raw(&self, c: u32) -> Polynomial {
        let mut out = Polynomial::zero(self.prime, self.num_vars);
        if c.is_multiple_of(self.prime.get()) {
            return out;
        }
        for (m, &v) in &self.terms {
            out.terms.insert(m.clone(), self.prime.mul(v, c));
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: u32) -> Polynomial {
        let mut out = Polynomial::zero(self.prime, self.num_vars);
        if c == 0 {
            return out;
        }
        for (t, &v) in &self.terms {
            out.terms.insert(t.mul(m), self.prime.mul(v, c));
        }
        out
    }

    pub(crate) fn add_scaled(&mut self, other: &Polynomial, c: u32) {
        if c == 0 {
            return;
        }
        for (m, &v) in &other.terms {
            self.add_term(m.clone(), self.prime.mul(v, c));
        }
    }

    pub fn pow(&self, exp: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.prime, self.num_vars);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `σ_j(f)`: exchanges `x_j` and `x_{j+1}` (1-based).
    pub fn transpose(&self, j: usize) -> Result<Polynomial> {
        if j == 0 || j >= self.num_vars {
            return Err(Error::Domain(format!(
                "transposition index {j} out of range for {} variables",
                self.num_vars
            )));
        }
        Ok(self.transpose_unchecked(j))
    }

    pub(crate) fn transpose_unchecked(&self, j: usize) -> Polynomial {
        let terms = self.terms.iter().map(|(m, &c)| (m.swapped(j), c)).collect();
        Polynomial { prime: self.prime, num_vars: self.num_vars, terms }
    }

    /// Exact quotient `self / divisor` by leading-term elimination in
    /// graded-lex order.
    pub fn exact_divide(&self, divisor: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(divisor)?;
        let (lead_m, lead_c) = divisor
            .leading_term()
            .map(|(m, c)| (m.clone(), c.value()))
            .ok_or_else(|| Error::Domain("division by the zero polynomial".into()))?;
        let lead_inv = self.prime.inv(lead_c);
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.prime, self.num_vars);
        while let Some((m, c)) = rem.terms.iter().next_back().map(|(m, &c)| (m.clone(), c)) {
            if !lead_m.divides(&m) {
                return Err(Error::NotDivisible);
            }
            let qm = lead_m.quotient_of(&m);
            let qc = self.prime.mul(c, lead_inv);
            for (t, &v) in &divisor.terms {
                rem.add_term(t.mul(&qm), self.prime.neg(self.prime.mul(v, qc)));
            }
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }

    /// Drops every term of degree above `degree_bound`.
    pub fn truncate_above(&self, degree_bound: u32) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() <= degree_bound)
            .map(|(m, &c)| (m.clone(), c))
            .collect();
        Polynomial { prime: self.prime, num_vars: self.num_vars, terms }
    }

    /// The homogeneous component of the given degree.
    pub fn component(&self, degree: u32) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == degree)
            .map(|(m, &c)| (m.clone(), c))
            .collect();
        Polynomial { prime: self.prime, num_vars: self.num_vars, terms }
    }

    pub fn is_sigma_invariant(&self, j: usize) -> bool {
        j >= 1 && j < self.num_vars && self.transpose_unchecked(j) == *self
    }

    pub fn is_symmetric(&self) -> bool {
        (1..self.num_vars).all(|j| self.transpose_unchecked(j) == *self)
    }
}

/// The elementary symmetric polynomial `e_i` in `n` variables; `e_0 = 1`.
pub fn elementary_symmetric(i: usize, n: usize, prime: Prime) -> Result<Polynomial> {
    if i > n {
        return Err(Error::Domain(format!("e_{i} is undefined in {n} variables")));
    }
    let mut out = Polynomial::zero(prime, n);
    for m in Monomial::with_total_exponent(n, i as u32) {
        if m.exponents().iter().all(|&a| a <= 1) {
            out.add_term(m, 1);
        }
    }
    Ok(out)
}

/// The power sum `p_k = x_1^k + ... + x_n^k`.
pub fn power_sum(k: u32, n: usize, prime: Prime) -> Result<Polynomial> {
    if k == 0 {
        return Err(Error::Domain("power sums are indexed from 1".into()));
    }
    let mut out = Polynomial::zero(prime, n);
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = k;
        out.add_term(Monomial(e), 1);
    }
    Ok(out)
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        out.add_scaled(rhs, 1);
        out
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        out.add_scaled(rhs, self.prime.get() - 1);
        out
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.assert_compatible(rhs);
        let mut out = Polynomial::zero(self.prime, self.num_vars);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &rhs.terms {
                out.add_term(ma.mul(mb), self.prime.mul(ca, cb));
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale_raw(self.prime.get() - 1)
    }
}

macro_rules! forward_owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial { (&self).$m(&rhs) }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: &Polynomial) -> Polynomial { (&self).$m(rhs) }
        }
    )*};
}
forward_owned_ops!(Add add, Sub sub, Mul mul);

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if a == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, a)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Terms in decreasing graded-lex order, e.g. `2*x1^2*x2 + x3`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, &c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let is_unit = m.total_exponent() == 0;
            match (c, is_unit) {
                (_, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{m}")?,
                _ => write!(f, "{c}*{m}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(v: u32) -> Prime {
        Prime::new(v).unwrap()
    }

    fn x(p: u32, n: usize, i: usize) -> Polynomial {
        Polynomial::var(pr(p), n, i)
    }

    #[test]
    fn transpose_examples() {
        let p = 5;
        assert_eq!(x(p, 2, 1).transpose(1).unwrap(), x(p, 2, 2));
        let sym = &x(p, 2, 1) * &x(p, 2, 2);
        assert_eq!(sym.transpose(1).unwrap(), sym);
        let f = &x(p, 3, 1).pow(2) + &x(p, 3, 3);
        let g = &x(p, 3, 2).pow(2) + &x(p, 3, 3);
        assert_eq!(f.transpose(1).unwrap(), g);
        assert!(f.transpose(3).is_err());
        assert!(f.transpose(0).is_err());
    }

    #[test]
    fn exact_divide_examples() {
        let p = 7;
        let (a, b) = (x(p, 2, 1), x(p, 2, 2));
        let diff = &a - &b;
        let sq = &a.pow(2) - &b.pow(2);
        assert_eq!(sq.exact_divide(&diff).unwrap(), &a + &b);
        let one = Polynomial::one(pr(p), 2);
        assert_eq!(sq.exact_divide(&one).unwrap(), sq);
        let cube = &a.pow(3) - &b.pow(3);
        let expected = &(&a.pow(2) + &(&a * &b)) + &b.pow(2);
        let q = cube.exact_divide(&diff).unwrap();
        assert_eq!(q, expected);
        assert_eq!(&q * &diff, cube);
    }

    #[test]
    fn exact_divide_failure() {
        let p = 3;
        let f = &x(p, 2, 1).pow(2) + &x(p, 2, 2);
        let g = &x(p, 2, 1) - &x(p, 2, 2);
        assert_eq!(f.exact_divide(&g), Err(Error::NotDivisible));
        assert!(f.exact_divide(&Polynomial::zero(pr(p), 2)).is_err());
    }

    #[test]
    fn elementary_symmetric_examples() {
        let p = 5;
        assert_eq!(elementary_symmetric(1, 2, pr(p)).unwrap(), &x(p, 2, 1) + &x(p, 2, 2));
        assert_eq!(elementary_symmetric(2, 2, pr(p)).unwrap(), &x(p, 2, 1) * &x(p, 2, 2));
        let e2 = elementary_symmetric(2, 3, pr(p)).unwrap();
        let expected = &(&(&x(p, 3, 1) * &x(p, 3, 2)) + &(&x(p, 3, 1) * &x(p, 3, 3)))
            + &(&x(p, 3, 2) * &x(p, 3, 3));
        assert_eq!(e2, expected);
        assert_eq!(elementary_symmetric(0, 3, pr(p)).unwrap(), Polynomial::one(pr(p), 3));
        assert!(elementary_symmetric(4, 3, pr(p)).is_err());
    }

    #[test]
    fn power_sum_examples() {
        let p = 5;
        let p1 = power_sum(1, 3, pr(p)).unwrap();
        assert_eq!(p1, &(&x(p, 3, 1) + &x(p, 3, 2)) + &x(p, 3, 3));
        assert_eq!(power_sum(2, 1, pr(p)).unwrap(), x(p, 1, 1).pow(2));
        assert_eq!(power_sum(3, 2, pr(p)).unwrap(), &x(p, 2, 1).pow(3) + &x(p, 2, 2).pow(3));
        assert!(power_sum(0, 2, pr(p)).is_err());
    }

    #[test]
    fn symmetry_predicates() {
        assert!(elementary_symmetric(2, 3, pr(3)).unwrap().is_symmetric());
        assert!(!x(3, 2, 1).is_symmetric());
        let f = Polynomial::from_terms(pr(7), 3, [(vec![1, 0, 0], 1), (vec![0, 1, 0], 1), (vec![0, 0, 1], 5)]);
        assert!(f.is_sigma_invariant(1));
        assert!(!f.is_sigma_invariant(2));
        assert!(!f.is_symmetric());
    }

    #[test]
    fn newton_identity() {
        for p in [3u32, 5, 7] {
            for n in 2..=4 {
                let e1 = elementary_symmetric(1, n, pr(p)).unwrap();
                let e2 = elementary_symmetric(2, n, pr(p)).unwrap();
                let p1 = power_sum(1, n, pr(p)).unwrap();
                let p2 = power_sum(2, n, pr(p)).unwrap();
                assert_eq!(&(&e1 * &p1) - &e2.scale(FpScalar::new(2, pr(p))), p2);
            }
        }
    }

    #[test]
    fn rendering() {
        let f = Polynomial::from_terms(pr(5), 3, [(vec![2, 1, 0], 2), (vec![0, 0, 1], 1)]);
        assert_eq!(f.to_string(), "2*x1^2*x2 + x3");
        assert_eq!(Polynomial::constant(pr(5), 2, 3).to_string(), "3");
        assert_eq!(Polynomial::zero(pr(5), 2).to_string(), "0");
    }

    #[test]
    fn degrees() {
        let f = Polynomial::from_terms(pr(5), 2, [(vec![2, 1], 1), (vec![0, 1], 1)]);
        assert_eq!(f.degree(), Some(6));
        assert!(!f.is_homogeneous());
        assert_eq!(f.homogeneous_degree(), None);
        assert_eq!(f.component(2).homogeneous_degree(), Some(2));
        assert_eq!(Monomial::up_to_degree(2, 4).len(), 6);
    }
}
