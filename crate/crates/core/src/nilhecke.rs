//! The nilHecke algebra `NH_n` acting on `F_p[x_1, ..., x_n]` by
//! multiplication and divided difference operators.
//!
//! Elements are kept in the normal form `Σ_w f_w ∂_w`, polynomial
//! coefficients on the left of a divided difference operator `∂_w` indexed
//! by a permutation. Raw words in the letters `X(i)`, `D(i)` are kept
//! separately as [`NhWordSum`] so the two representations can be checked
//! against each other.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{FpScalar, Prime};
use crate::error::{Error, Result};
use crate::poly::{elementary_symmetric, Monomial, Polynomial};

/// A permutation of `{1, ..., n}` in one-line notation, with its length and
/// lexicographically least reduced word cached.
#[derive(Debug, Clone)]
pub struct Permutation {
    images: Vec<usize>,
    length: usize,
    reduced_word: Vec<usize>,
}

impl Permutation {
    /// Builds from 1-based images `w(1), ..., w(n)`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n || seen[v] {
                return Err(Error::Domain(format!("{images:?} is not a permutation of 1..{n}")));
            }
            seen[v] = true;
        }
        Ok(Self::from_valid(images))
    }

    fn from_valid(images: Vec<usize>) -> Self {
        let length = inversions(&images);
        let reduced_word = lex_least_reduced_word(&images);
        debug_assert_eq!(reduced_word.len(), length);
        Permutation { images, length, reduced_word }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_valid((1..=n).collect())
    }

    /// The simple transposition `s_i = (i, i+1)`.
    pub fn simple(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i < n, "s_{i} is not defined in S_{n}");
        let mut images: Vec<usize> = (1..=n).collect();
        images.swap(i - 1, i);
        Self::from_valid(images)
    }

    /// The longest element `w_0 = (n, n-1, ..., 1)`.
    pub fn longest(n: usize) -> Self {
        Self::from_valid((1..=n).rev().collect())
    }

    /// Product of simple transpositions `s_{i_1} ∘ ... ∘ s_{i_k}`.
    pub fn from_word(n: usize, word: &[usize]) -> Self {
        word.iter()
            .rev()
            .fold(Self::identity(n), |acc, &i| acc.left_mul_simple(i))
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// A reduced word `i_1 ... i_k` with `w = s_{i_1} ∘ ... ∘ s_{i_k}`,
    /// lexicographically least among all reduced words.
    pub fn reduced_word(&self) -> &[usize] {
        &self.reduced_word
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (pos, &v) in self.images.iter().enumerate() {
            inv[v - 1] = pos + 1;
        }
        Self::from_valid(inv)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.n(), other.n());
        Self::from_valid(other.images.iter().map(|&v| self.images[v - 1]).collect())
    }

    /// `s_i ∘ self`: exchanges the values `i` and `i+1`.
    pub fn left_mul_simple(&self, i: usize) -> Self {
        let images = self
            .images
            .iter()
            .map(|&v| if v == i { i + 1 } else if v == i + 1 { i } else { v })
            .collect();
        Self::from_valid(images)
    }

    /// Whether `l(s_i ∘ self) < l(self)`.
    pub fn has_left_descent(&self, i: usize) -> bool {
        position(&self.images, i + 1) < position(&self.images, i)
    }

    /// All of `S_n`, ordered by length and then by images.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (1..=n).collect();
        permutations_rec(0, &mut cur, &mut out);
        let mut perms: Vec<Permutation> = out.into_iter().map(Self::from_valid).collect();
        perms.sort_by(|a, b| a.length.cmp(&b.length).then_with(|| a.images.cmp(&b.images)));
        perms
    }
}

fn permutations_rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permutations_rec(k + 1, cur, out);
        cur.swap(k, i);
    }
}

fn position(images: &[usize], v: usize) -> usize {
    images.iter().position(|&x| x == v).expect("value present")
}

fn inversions(images: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if images[i] > images[j] {
                count += 1;
            }
        }
    }
    count
}

fn lex_least_reduced_word(images: &[usize]) -> Vec<usize> {
    let mut w = images.to_vec();
    let mut word = Vec::new();
    loop {
        let descent = (1..w.len()).find(|&i| position(&w, i + 1) < position(&w, i));
        let Some(i) = descent else { break };
        word.push(i);
        for v in w.iter_mut() {
            if *v == i {
                *v = i + 1;
            } else if *v == i + 1 {
                *v = i;
            }
        }
    }
    word
}

impl PartialEq for Permutation {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
    }
}

impl Eq for Permutation {}

impl std::hash::Hash for Permutation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.images.hash(state);
    }
}

impl Ord for Permutation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.length
            .cmp(&other.length)
            .then_with(|| self.images.cmp(&other.images))
    }
}

impl PartialOrd for Permutation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A generator of `NH_n`: multiplication by `x_i` or the operator `∂_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NhLetter {
    X(usize),
    D(usize),
}

impl NhLetter {
    pub fn degree(self) -> i64 {
        match self {
            NhLetter::X(_) => 2,
            NhLetter::D(_) => -2,
        }
    }

    fn check(self, n: usize) -> Result<()> {
        let ok = match self {
            NhLetter::X(i) => i >= 1 && i <= n,
            NhLetter::D(i) => i >= 1 && i < n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("{self} is not a generator of NH_{n}")))
        }
    }
}

impl fmt::Display for NhLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NhLetter::X(i) => write!(f, "X{i}"),
            NhLetter::D(i) => write!(f, "D{i}"),
        }
    }
}

/// A word in the generators; acts by applying its rightmost letter first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NhWord(pub Vec<NhLetter>);

impl NhWord {
    pub fn new(letters: Vec<NhLetter>) -> Self {
        NhWord(letters)
    }

    pub fn letters(&self) -> &[NhLetter] {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|l| l.degree()).sum()
    }

    pub fn concat(&self, other: &NhWord) -> NhWord {
        NhWord(self.0.iter().chain(&other.0).copied().collect())
    }
}

impl fmt::Display for NhWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Anything that acts linearly on polynomials.
pub trait PolyOperator {
    fn apply_to(&self, f: &Polynomial) -> Result<Polynomial>;
}

impl<F> PolyOperator for F
where
    F: Fn(&Polynomial) -> Result<Polynomial>,
{
    fn apply_to(&self, f: &Polynomial) -> Result<Polynomial> {
        self(f)
    }
}

/// A formal F_p-linear combination of words, not rewritten.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NhWordSum {
    prime: Prime,
    num_vars: usize,
    terms: Vec<(NhWord, u32)>,
}

impl NhWordSum {
    pub fn zero(prime: Prime, num_vars: usize) -> Self {
        NhWordSum { prime, num_vars, terms: Vec::new() }
    }

    pub fn word(prime: Prime, num_vars: usize, word: NhWord) -> Result<Self> {
        let mut s = Self::zero(prime, num_vars);
        s.push(word, FpScalar::one(prime))?;
        Ok(s)
    }

    pub fn push(&mut self, word: NhWord, c: FpScalar) -> Result<()> {
        for l in word.letters() {
            l.check(self.num_vars)?;
        }
        if !c.is_zero() {
            self.terms.push((word, c.value()));
        }
        Ok(())
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NhWord, FpScalar)> + '_ {
        self.terms.iter().map(move |(w, c)| (w, FpScalar::new(*c as i64, self.prime)))
    }

    pub fn add(&self, other: &NhWordSum) -> NhWordSum {
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        out
    }

    pub fn scale(&self, c: FpScalar) -> NhWordSum {
        let mut out = Self::zero(self.prime, self.num_vars);
        if c.is_zero() {
            return out;
        }
        out.terms = self
            .terms
            .iter()
            .map(|(w, v)| (w.clone(), self.prime.mul(*v, c.value())))
            .collect();
        out
    }

    pub fn sub(&self, other: &NhWordSum) -> NhWordSum {
        self.add(&other.scale(FpScalar::new(-1, self.prime)))
    }

    /// Product of formal sums by word concatenation.
    pub fn mul(&self, other: &NhWordSum) -> NhWordSum {
        let mut out = Self::zero(self.prime, self.num_vars);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.terms.push((a.concat(b), self.prime.mul(*ca, *cb)));
            }
        }
        out
    }

    pub fn normalize(&self) -> NilHeckeElement {
        normalize(self)
    }
}

impl PolyOperator for NhWordSum {
    fn apply_to(&self, f: &Polynomial) -> Result<Polynomial> {
        check_arity(self.prime, self.num_vars, f)?;
        let mut out = Polynomial::zero(self.prime, self.num_vars);
        for (w, c) in &self.terms {
            out.add_scaled(&apply_word(w, f)?, *c);
        }
        Ok(out)
    }
}

impl fmt::Display for NhWordSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *c == 1 {
                write!(f, "{w}")?;
            } else if w.0.is_empty() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{w}")?;
            }
        }
        Ok(())
    }
}

fn check_arity(prime: Prime, num_vars: usize, f: &Polynomial) -> Result<()> {
    if f.prime() != prime || f.num_vars() != num_vars {
        return Err(Error::Mismatch(format!(
            "operator over F_{prime} in {num_vars} variables applied to a polynomial over F_{} in {} variables",
            f.prime(),
            f.num_vars()
        )));
    }
    Ok(())
}

/// `∂_j(f) = (f - σ_j f) / (x_j - x_{j+1})`.
pub fn divided_difference(f: &Polynomial, j: usize) -> Result<Polynomial> {
    let swapped = f.transpose(j)?;
    let n = f.num_vars();
    let p = f.prime();
    let divisor = &Polynomial::var(p, n, j) - &Polynomial::var(p, n, j + 1);
    (f - &swapped).exact_divide(&divisor)
}

/// Applies a raw word to a polynomial, rightmost letter first.
pub fn apply_word(word: &NhWord, f: &Polynomial) -> Result<Polynomial> {
    let n = f.num_vars();
    let mut cur = f.clone();
    for &letter in word.letters().iter().rev() {
        letter.check(n)?;
        cur = match letter {
            NhLetter::X(i) => cur.mul_monomial(&Monomial::var(n, i), 1),
            NhLetter::D(i) => divided_difference(&cur, i)?,
        };
        if cur.is_zero() {
            break;
        }
    }
    Ok(cur)
}

/// `∂_w(f)` computed along the reduced word of `w`.
pub fn apply_permutation(w: &Permutation, f: &Polynomial) -> Result<Polynomial> {
    let mut cur = f.clone();
    for &i in w.reduced_word().iter().rev() {
        cur = divided_difference(&cur, i)?;
        if cur.is_zero() {
            break;
        }
    }
    Ok(cur)
}

/// `∂_u(f)` for every `u ∈ S_n`, sharing prefixes of reduced words.
pub fn all_divided_differences(f: &Polynomial) -> Result<BTreeMap<Permutation, Polynomial>> {
    let n = f.num_vars();
    let mut out: BTreeMap<Permutation, Polynomial> = BTreeMap::new();
    for u in Permutation::all(n) {
        let value = match u.reduced_word().first() {
            None => f.clone(),
            Some(&i) => {
                let rest = u.left_mul_simple(i);
                divided_difference(&out[&rest], i)?
            }
        };
        out.insert(u, value);
    }
    Ok(out)
}

/// An element of `NH_n` in the normal form `Σ_w f_w ∂_w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NilHeckeElement {
    prime: Prime,
    num_vars: usize,
    terms: BTreeMap<Permutation, Polynomial>,
}

impl NilHeckeElement {
    pub fn zero(prime: Prime, num_vars: usize) -> Self {
        NilHeckeElement { prime, num_vars, terms: BTreeMap::new() }
    }

    pub fn one(prime: Prime, num_vars: usize) -> Self {
        Self::multiplication(&Polynomial::one(prime, num_vars))
    }

    /// The operator of multiplication by `f`.
    pub fn multiplication(f: &Polynomial) -> Self {
        Self::from_parts(f.prime(), f.num_vars(), [(Permutation::identity(f.num_vars()), f.clone())])
    }

    /// `f ∂_w`
    pub fn term(f: &Polynomial, w: Permutation) -> Self {
        Self::from_parts(f.prime(), f.num_vars(), [(w, f.clone())])
    }

    pub fn x(prime: Prime, num_vars: usize, i: usize) -> Self {
        Self::multiplication(&Polynomial::var(prime, num_vars, i))
    }

    /// The divided difference generator `∂_i`.
    pub fn d(prime: Prime, num_vars: usize, i: usize) -> Self {
        Self::term(&Polynomial::one(prime, num_vars), Permutation::simple(num_vars, i))
    }

    pub fn from_parts<I>(prime: Prime, num_vars: usize, parts: I) -> Self
    where
        I: IntoIterator<Item = (Permutation, Polynomial)>,
    {
        let mut e = Self::zero(prime, num_vars);
        for (w, f) in parts {
            e.add_part(w, &f, 1);
        }
        e
    }

    fn add_part(&mut self, w: Permutation, f: &Polynomial, c: u32) {
        if f.is_zero() || c == 0 {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(slot) => {
                slot.add_scaled(f, c);
                if slot.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, f.scale_raw(c));
            }
        }
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

    /// The polynomial coefficients `f_w`.
    pub fn parts(&self) -> impl Iterator<Item = (&Permutation, &Polynomial)> {
        self.terms.iter()
    }

    pub fn coefficient_of(&self, w: &Permutation) -> Polynomial {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.prime, self.num_vars))
    }

    /// The normal form as a map `(x^a, w) -> c` for the basis `x^a ∂_w`.
    pub fn normal_form(&self) -> BTreeMap<(Monomial, Permutation), FpScalar> {
        let mut out = BTreeMap::new();
        for (w, f) in &self.terms {
            for (m, c) in f.terms() {
                out.insert((m.clone(), w.clone()), c);
            }
        }
        out
    }

    /// Degree of a homogeneous element; `None` when zero or inhomogeneous.
    pub fn degree(&self) -> Option<i64> {
        let mut degrees = self.terms.iter().flat_map(|(w, f)| {
            f.terms().map(move |(m, _)| m.degree() as i64 - 2 * w.length() as i64)
        });
        let d = degrees.next()?;
        degrees.all(|e| e == d).then_some(d)
    }

    pub fn add(&self, other: &NilHeckeElement) -> NilHeckeElement {
        self.add_scaled(other, FpScalar::one(self.prime))
    }

    pub fn sub(&self, other: &NilHeckeElement) -> NilHeckeElement {
        self.add_scaled(other, FpScalar::new(-1, self.prime))
    }

    pub fn add_scaled(&self, other: &NilHeckeElement, c: FpScalar) -> NilHeckeElement {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (w, f) in &other.terms {
            out.add_part(w.clone(), f, c.value());
        }
        out
    }

    pub fn scale(&self, c: FpScalar) -> NilHeckeElement {
        let mut out = Self::zero(self.prime, self.num_vars);
        for (w, f) in &self.terms {
            out.add_part(w.clone(), f, c.value());
        }
        out
    }

    fn assert_compatible(&self, other: &NilHeckeElement) {
        assert!(
            self.prime == other.prime && self.num_vars == other.num_vars,
            "nilHecke elements from different algebras"
        );
    }

    /// Left multiplication by a polynomial.
    pub fn left_mul_poly(&self, g: &Polynomial) -> NilHeckeElement {
        let mut out = Self::zero(self.prime, self.num_vars);
        for (w, f) in &self.terms {
            out.add_part(w.clone(), &(g * f), 1);
        }
        out
    }

    /// `letter · self`, rewritten into normal form with
    /// `∂_i f = ∂_i(f) + σ_i(f) ∂_i` and `∂_i ∂_w = ∂_{s_i w}` or 0.
    pub fn left_mul_letter(&self, letter: NhLetter) -> NilHeckeElement {
        let n = self.num_vars;
        match letter {
            NhLetter::X(i) => {
                let xi = Monomial::var(n, i);
                let mut out = Self::zero(self.prime, n);
                for (w, f) in &self.terms {
                    out.add_part(w.clone(), &f.mul_monomial(&xi, 1), 1);
                }
                out
            }
            NhLetter::D(i) => {
                let mut out = Self::zero(self.prime, n);
                for (w, f) in &self.terms {
                    let df = divided_difference(f, i).expect("divided differences are exact");
                    out.add_part(w.clone(), &df, 1);
                    if !w.has_left_descent(i) {
                        out.add_part(w.left_mul_simple(i), &f.transpose_unchecked(i), 1);
                    }
                }
                out
            }
        }
    }

    /// Composition `self ∘ other`.
    pub fn mul(&self, other: &NilHeckeElement) -> NilHeckeElement {
        self.assert_compatible(other);
        let mut out = Self::zero(self.prime, self.num_vars);
        for (u, f) in &self.terms {
            let mut cur = other.clone();
            for &i in u.reduced_word().iter().rev() {
                cur = cur.left_mul_letter(NhLetter::D(i));
            }
            out = out.add(&cur.left_mul_poly(f));
        }
        out
    }

    pub fn pow(&self, e: u32) -> NilHeckeElement {
        (0..e).fold(Self::one(self.prime, self.num_vars), |acc, _| acc.mul(self))
    }

    /// Rewrites the element as a formal sum of words `X... D...`.
    pub fn to_word_sum(&self) -> NhWordSum {
        let mut out = NhWordSum::zero(self.prime, self.num_vars);
        for ((m, w), c) in self.normal_form() {
            let mut letters = Vec::new();
            for (i, &a) in m.exponents().iter().enumerate() {
                letters.extend(std::iter::repeat_n(NhLetter::X(i + 1), a as usize));
            }
            letters.extend(w.reduced_word().iter().map(|&i| NhLetter::D(i)));
            out.push(NhWord(letters), c).expect("letters in range");
        }
        out
    }
}

impl PolyOperator for NilHeckeElement {
    fn apply_to(&self, f: &Polynomial) -> Result<Polynomial> {
        check_arity(self.prime, self.num_vars, f)?;
        let mut out = Polynomial::zero(self.prime, self.num_vars);
        for (w, g) in &self.terms {
            let dw = apply_permutation(w, f)?;
            if !dw.is_zero() {
                out = &out + &(g * &dw);
            }
        }
        Ok(out)
    }
}

/// Renders as a sum of `c*x^a*D_i1*...*D_ik` terms; parses back with the
/// nilHecke expression grammar.
impl fmt::Display for NilHeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, poly) in &self.terms {
            for (m, c) in poly.terms().rev() {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                let mut factors: Vec<String> = Vec::new();
                if c.value() != 1 {
                    factors.push(c.to_string());
                }
                if m.total_exponent() > 0 {
                    factors.push(m.to_string());
                }
                factors.extend(w.reduced_word().iter().map(|i| format!("D{i}")));
                if factors.is_empty() {
                    factors.push("1".to_string());
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Rewrites a formal sum of words into the basis `{x^a ∂_w}`.
pub fn normalize(expr: &NhWordSum) -> NilHeckeElement {
    let (p, n) = (expr.prime(), expr.num_vars());
    let mut out = NilHeckeElement::zero(p, n);
    for (word, c) in expr.terms() {
        let mut cur = NilHeckeElement::one(p, n);
        for &letter in word.letters().iter().rev() {
            cur = cur.left_mul_letter(letter);
            if cur.is_zero() {
                break;
            }
        }
        out = out.add_scaled(&cur, c);
    }
    out
}

/// The Schubert polynomial `∂_{w^{-1} w_0}(x_1^{n-1} x_2^{n-2} ... x_{n-1})`.
pub fn schubert(w: &Permutation, prime: Prime) -> Polynomial {
    let n = w.n();
    let staircase: Vec<u32> = (0..n).map(|i| (n - 1 - i) as u32).collect();
    let top = Polynomial::from_monomial(prime, Monomial::new(staircase), 1);
    let u = w.inverse().compose(&Permutation::longest(n));
    apply_permutation(&u, &top).expect("divided differences are exact")
}

/// Whether `op(e_i f) = e_i op(f)` for every elementary symmetric `e_i`,
/// `i ≥ 1`, and every monomial `f` with `deg(e_i f) ≤ degree_bound`.
pub fn sym_linearity_check<O: PolyOperator + ?Sized>(
    op: &O,
    prime: Prime,
    num_vars: usize,
    degree_bound: u32,
) -> Result<bool> {
    for i in 1..=num_vars {
        let e = elementary_symmetric(i, num_vars, prime)?;
        let budget = degree_bound.saturating_sub(2 * i as u32);
        if 2 * i as u32 > degree_bound {
            continue;
        }
        for m in Monomial::up_to_degree(num_vars, budget) {
            let f = Polynomial::from_monomial(prime, m, 1);
            let lhs = op.apply_to(&(&e * &f))?;
            let rhs = &e * &op.apply_to(&f)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A defining relation `lhs = rhs` of `NH_n`.
#[derive(Debug, Clone)]
pub struct Relation {
    pub name: String,
    pub lhs: NhWordSum,
    pub rhs: NhWordSum,
}

/// Every defining relation of `NH_n`, instantiated over all admissible
/// indices.
pub fn defining_relations(prime: Prime, n: usize) -> Vec<Relation> {
    use NhLetter::{D, X};
    let word = |letters: &[NhLetter]| {
        NhWordSum::word(prime, n, NhWord(letters.to_vec())).expect("indices in range")
    };
    let zero = NhWordSum::zero(prime, n);
    let one = word(&[]);
    let mut out = Vec::new();
    for i in 1..n {
        out.push(Relation { name: format!("D{i}^2 = 0"), lhs: word(&[D(i), D(i)]), rhs: zero.clone() });
        if i + 1 < n {
            out.push(Relation {
                name: format!("braid D{i}D{}D{i}", i + 1),
                lhs: word(&[D(i), D(i + 1), D(i)]),
                rhs: word(&[D(i + 1), D(i), D(i + 1)]),
            });
        }
        out.push(Relation {
            name: format!("X{i}D{i} - D{i}X{} = 1", i + 1),
            lhs: word(&[X(i), D(i)]).sub(&word(&[D(i), X(i + 1)])),
            rhs: one.clone(),
        });
        out.push(Relation {
            name: format!("D{i}X{i} - X{}D{i} = 1", i + 1),
            lhs: word(&[D(i), X(i)]).sub(&word(&[X(i + 1), D(i)])),
            rhs: one.clone(),
        });
        for j in 1..=n {
            if i.abs_diff(j) > 1 {
                out.push(Relation {
                    name: format!("D{i}X{j} = X{j}D{i}"),
                    lhs: word(&[D(i), X(j)]),
                    rhs: word(&[X(j), D(i)]),
                });
            }
        }
        for j in i + 1..n {
            if j - i > 1 {
                out.push(Relation {
                    name: format!("D{i}D{j} = D{j}D{i}"),
                    lhs: word(&[D(i), D(j)]),
                    rhs: word(&[D(j), D(i)]),
                });
            }
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            out.push(Relation {
                name: format!("X{i}X{j} = X{j}X{i}"),
                lhs: word(&[X(i), X(j)]),
                rhs: word(&[X(j), X(i)]),
            });
        }
    }
    out
}

/// Compares two operators on every monomial of degree at most
/// `degree_bound`; returns the first monomial where they differ.
pub fn first_disagreement<A, B>(
    a: &A,
    b: &B,
    prime: Prime,
    num_vars: usize,
    degree_bound: u32,
) -> Result<Option<Monomial>>
where
    A: PolyOperator + ?Sized,
    B: PolyOperator + ?Sized,
{
    for m in Monomial::up_to_degree(num_vars, degree_bound) {
        let f = Polynomial::from_monomial(prime, m.clone(), 1);
        if a.apply_to(&f)? != b.apply_to(&f)? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// Recovers the nilHecke element realizing a `Sym_n`-linear operator.
///
/// Uses the Schubert basis of `P_n` over `Sym_n`: since `∂_u 𝔖_v` vanishes
/// unless `l(u) < l(v)` or `u = v` (where it is 1), the coefficients satisfy
/// `f_v = T(𝔖_v) - Σ_{l(u) < l(v)} f_u ∂_u(𝔖_v)`. The candidate is then
/// checked against `op` on every monomial of degree at most `degree_bound`.
pub fn reconstruct<O: PolyOperator + ?Sized>(
    op: &O,
    prime: Prime,
    num_vars: usize,
    degree_bound: u32,
) -> Result<NilHeckeElement> {
    let perms = Permutation::all(num_vars);
    let mut parts: Vec<(Permutation, Polynomial)> = Vec::new();
    for v in &perms {
        let sv = schubert(v, prime);
        let mut fv = op.apply_to(&sv)?;
        let diffs = all_divided_differences(&sv)?;
        for (u, fu) in &parts {
            if u.length() < v.length() {
                let d = &diffs[u];
                if !d.is_zero() {
                    fv = &fv - &(fu * d);
                }
            }
        }
        if !fv.is_zero() {
            parts.push((v.clone(), fv));
        }
    }
    let candidate = NilHeckeElement::from_parts(prime, num_vars, parts);
    for m in Monomial::up_to_degree(num_vars, degree_bound) {
        let f = Polynomial::from_monomial(prime, m.clone(), 1);
        let expected = op.apply_to(&f)?;
        let diffs = all_divided_differences(&f)?;
        let mut got = Polynomial::zero(prime, num_vars);
        for (w, g) in candidate.parts() {
            let d = &diffs[w];
            if !d.is_zero() {
                got = &got + &(g * d);
            }
        }
        if got != expected {
            return Err(Error::Reconstruction(format!("mismatch on monomial {m}")));
        }
    }
    Ok(candidate)
}
