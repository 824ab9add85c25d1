//! The reduced-power Steenrod algebra `A_p` (no Bockstein): Adem rewriting,
//! actions on `F_p[x_1, ..., x_n]`, the antipode, the induced action on
//! nilHecke operators, Margolis differentials and the Milnor coaction on one
//! variable.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::arith::{binomial_raw, FpScalar, Prime};
use crate::error::{Error, Result};
use crate::nilhecke::{reconstruct, NilHeckeElement, PolyOperator};
use crate::poly::{Monomial, Polynomial};

/// Degree convention for `A_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grading {
    /// `|P^k| = 2k(p-1)`, `|ξ_k| = 2(p^k - 1)`.
    Topological,
    /// `|P^k| = 2k`, `|ξ_k| = 2(p^k - 1)/(p - 1)`.
    Compressed,
}

impl Grading {
    pub fn power_degree(self, k: u32, p: Prime) -> u64 {
        match self {
            Grading::Topological => 2 * k as u64 * (p.get() as u64 - 1),
            Grading::Compressed => 2 * k as u64,
        }
    }

    pub fn xi_degree(self, k: u32, p: Prime) -> u64 {
        let pk = (p.get() as u64).pow(k);
        match self {
            Grading::Topological => 2 * (pk - 1),
            Grading::Compressed => 2 * (pk - 1) / (p.get() as u64 - 1),
        }
    }
}

/// Which module structure `A_p` uses on the polynomial ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionKind {
    /// `P^k(y^n) = C(n, k) y^{n + k(p-1)}`.
    Standard,
    /// `P^k(x_i) = C(p-1, k) x_i^{k+1}`, extended by the Cartan formula.
    Nonstandard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ActionSpec {
    pub kind: ActionKind,
    pub prime: Prime,
}

impl ActionSpec {
    pub fn standard(prime: Prime) -> Self {
        ActionSpec { kind: ActionKind::Standard, prime }
    }

    pub fn nonstandard(prime: Prime) -> Self {
        ActionSpec { kind: ActionKind::Nonstandard, prime }
    }

    /// Coefficient `c` in `P^k(x) = c x^{1 + k·shift}` on a generator.
    pub fn generator_coefficient(&self, k: u32) -> u32 {
        let p = self.prime;
        match self.kind {
            ActionKind::Standard => u32::from(k <= 1),
            ActionKind::Nonstandard => {
                if k < p.get() {
                    binomial_raw(p.get() as i64 - 1, k as u64, p)
                } else {
                    0
                }
            }
        }
    }

    /// Exponent added to a generator by `P^1`.
    pub fn shift(&self) -> u32 {
        match self.kind {
            ActionKind::Standard => self.prime.get() - 1,
            ActionKind::Nonstandard => 1,
        }
    }

    /// Coefficient of `x^{a + k·shift}` in `P^k(x^a)`.
    ///
    /// By Cartan this is the coefficient of `t^k` in `c(t)^a`, where
    /// `c(t) = Σ_j P^j-coefficient · t^j` is `1 + t` for the standard action and
    /// `(1 + t)^{p-1}` for the nonstandard one.
    pub fn power_coefficient(&self, a: u32, k: u32) -> u32 {
        let p = self.prime;
        match self.kind {
            ActionKind::Standard => binomial_raw(a as i64, k as u64, p),
            ActionKind::Nonstandard => {
                binomial_raw(a as i64 * (p.get() as i64 - 1), k as u64, p)
            }
        }
    }
}

/// A word `P^{a_1} ... P^{a_k}`; `P^0` letters are dropped.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct SteenrodWord(Vec<u32>);

impl SteenrodWord {
    pub fn new(exponents: Vec<u32>) -> Self {
        SteenrodWord(exponents.into_iter().filter(|&a| a > 0).collect())
    }

    pub fn unit() -> Self {
        SteenrodWord(Vec::new())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the exponents.
    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&a| a as u64).sum()
    }

    pub fn degree(&self, grading: Grading, p: Prime) -> u64 {
        grading.power_degree(1, p) * self.weight()
    }

    pub fn is_admissible(&self, p: Prime) -> bool {
        self.0.windows(2).all(|w| w[0] >= p.get() * w[1])
    }

    pub fn concat(&self, other: &SteenrodWord) -> SteenrodWord {
        SteenrodWord(self.0.iter().chain(&other.0).copied().collect())
    }
}

impl fmt::Display for SteenrodWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|a| format!("P({a})")).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// An F_p-linear combination of Steenrod words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SteenrodElement {
    prime: Prime,
    grading: Grading,
    terms: BTreeMap<SteenrodWord, u32>,
}

impl SteenrodElement {
    pub fn zero(prime: Prime) -> Self {
        SteenrodElement { prime, grading: Grading::Topological, terms: BTreeMap::new() }
    }

    pub fn one(prime: Prime) -> Self {
        Self::word(prime, SteenrodWord::unit())
    }

    /// The single reduced power `P^k`.
    pub fn power(prime: Prime, k: u32) -> Self {
        Self::word(prime, SteenrodWord::new(vec![k]))
    }

    pub fn word(prime: Prime, word: SteenrodWord) -> Self {
        let mut e = Self::zero(prime);
        e.add_term(word, 1);
        e
    }

    pub fn from_terms<I>(prime: Prime, terms: I) -> Self
    where
        I: IntoIterator<Item = (SteenrodWord, i64)>,
    {
        let mut e = Self::zero(prime);
        for (w, c) in terms {
            e.add_term(w, prime.reduce(c));
        }
        e
    }

    pub fn with_grading(mut self, grading: Grading) -> Self {
        self.grading = grading;
        self
    }

    fn add_term(&mut self, w: SteenrodWord, c: u32) {
        if c == 0 {
            return;
        }
        let p = self.prime;
        let slot = self.terms.entry(w.clone()).or_insert(0);
        *slot = p.add(*slot, c);
        if *slot == 0 {
            self.terms.remove(&w);
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SteenrodWord, FpScalar)> + '_ {
        self.terms.iter().map(move |(w, &c)| (w, FpScalar::new(c as i64, self.prime)))
    }

    pub fn coefficient(&self, w: &SteenrodWord) -> FpScalar {
        FpScalar::new(self.terms.get(w).copied().unwrap_or(0) as i64, self.prime)
    }

    /// Common degree of all words, or `None` for zero or inhomogeneous elements.
    pub fn degree(&self) -> Option<u64> {
        let mut degrees = self.terms.keys().map(|w| w.degree(self.grading, self.prime));
        let d = degrees.next()?;
        degrees.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn is_admissible(&self) -> bool {
        self.terms.keys().all(|w| w.is_admissible(self.prime))
    }

    fn assert_compatible(&self, other: &SteenrodElement) {
        assert_eq!(self.prime, other.prime, "Steenrod elements over different primes");
    }

    pub fn add(&self, other: &SteenrodElement) -> SteenrodElement {
        self.add_scaled(other, FpScalar::one(self.prime))
    }

    pub fn sub(&self, other: &SteenrodElement) -> SteenrodElement {
        self.add_scaled(other, FpScalar::new(-1, self.prime))
    }

    pub fn add_scaled(&self, other: &SteenrodElement, c: FpScalar) -> SteenrodElement {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (w, &v) in &other.terms {
            out.add_term(w.clone(), self.prime.mul(v, c.value()));
        }
        out
    }

    pub fn scale(&self, c: FpScalar) -> SteenrodElement {
        let mut out = Self::zero(self.prime).with_grading(self.grading);
        for (w, &v) in &self.terms {
            out.add_term(w.clone(), self.prime.mul(v, c.value()));
        }
        out
    }

    /// Product by concatenation of words, without rewriting.
    pub fn mul(&self, other: &SteenrodElement) -> SteenrodElement {
        self.assert_compatible(other);
        let mut out = Self::zero(self.prime).with_grading(self.grading);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                out.add_term(a.concat(b), self.prime.mul(ca, cb));
            }
        }
        out
    }

    pub fn adem_normalize(&self) -> SteenrodElement {
        adem_normalize(self)
    }

    pub fn antipode(&self) -> SteenrodElement {
        antipode(self)
    }

    /// `Δ(θ) = Σ θ' ⊗ θ''`, multiplicative on words with `Δ(P^k) = Σ P^i ⊗ P^{k-i}`.
    pub fn coproduct(&self) -> Vec<(SteenrodWord, SteenrodWord, FpScalar)> {
        let mut acc: BTreeMap<(SteenrodWord, SteenrodWord), u32> = BTreeMap::new();
        for (w, &c) in &self.terms {
            let mut splits: Vec<(Vec<u32>, Vec<u32>)> = vec![(Vec::new(), Vec::new())];
            for &a in w.exponents() {
                splits = splits
                    .into_iter()
                    .flat_map(|(l, r)| {
                        (0..=a).map(move |i| {
                            let mut l = l.clone();
                            let mut r = r.clone();
                            l.push(i);
                            r.push(a - i);
                            (l, r)
                        })
                    })
                    .collect();
            }
            for (l, r) in splits {
                let key = (SteenrodWord::new(l), SteenrodWord::new(r));
                let slot = acc.entry(key).or_insert(0);
                *slot = self.prime.add(*slot, c);
            }
        }
        acc.into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|((l, r), c)| (l, r, FpScalar::new(c as i64, self.prime)))
            .collect()
    }
}

impl fmt::Display for SteenrodElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, &c)| match (c, w.is_empty()) {
                (1, _) => w.to_string(),
                (_, true) => c.to_string(),
                _ => format!("{c}*{w}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Order in which inadmissible pairs are rewritten.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdemStrategy {
    /// Always rewrite the leftmost inadmissible pair; memoized per word.
    LeftmostFirst,
    /// Always rewrite the rightmost inadmissible pair; not memoized.
    RightmostFirst,
}

/// `P^a P^b = Σ_j (-1)^{a+j} C((p-1)(b-j) - 1, a - pj) P^{a+b-j} P^j` for
/// `0 < a < pb`, as `(a+b-j, j, coefficient)` triples with nonzero coefficient.
pub fn adem_relation(a: u32, b: u32, p: Prime) -> Vec<(u32, u32, FpScalar)> {
    let pp = p.get();
    assert!(a > 0 && a < pp * b, "P^{a}P^{b} is already admissible");
    let mut out = Vec::new();
    for j in 0..=a / pp {
        let top = (pp as i64 - 1) * (b as i64 - j as i64) - 1;
        let c = binomial_raw(top, (a - pp * j) as u64, p);
        let c = p.mul(c, p.sign((a + j) as u64));
        if c != 0 {
            out.push((a + b - j, j, FpScalar::new(c as i64, p)));
        }
    }
    out
}

type RawCombination = Vec<(Vec<u32>, u32)>;

fn adem_cache() -> &'static RwLock<HashMap<(u32, Vec<u32>), RawCombination>> {
    static CACHE: OnceLock<RwLock<HashMap<(u32, Vec<u32>), RawCombination>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn inadmissible_pair(word: &[u32], p: u32, strategy: AdemStrategy) -> Option<usize> {
    let mut positions = (0..word.len().saturating_sub(1)).filter(|&i| word[i] < p * word[i + 1]);
    match strategy {
        AdemStrategy::LeftmostFirst => positions.next(),
        AdemStrategy::RightmostFirst => positions.next_back(),
    }
}

fn normalize_word(word: &[u32], p: Prime, strategy: AdemStrategy) -> RawCombination {
    let memo = strategy == AdemStrategy::LeftmostFirst;
    if memo {
        let cache = adem_cache().read().expect("adem cache poisoned");
        if let Some(hit) = cache.get(&(p.get(), word.to_vec())) {
            return hit.clone();
        }
    }
    let result = match inadmissible_pair(word, p.get(), strategy) {
        None => vec![(word.to_vec(), 1)],
        Some(i) => {
            let mut acc: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
            for (first, second, c) in adem_relation(word[i], word[i + 1], p) {
                let mut next: Vec<u32> = word[..i].to_vec();
                next.push(first);
                if second > 0 {
                    next.push(second);
                }
                next.extend_from_slice(&word[i + 2..]);
                for (w, v) in normalize_word(&next, p, strategy) {
                    let slot = acc.entry(w).or_insert(0);
                    *slot = p.add(*slot, p.mul(v, c.value()));
                }
            }
            acc.into_iter().filter(|(_, c)| *c != 0).collect()
        }
    };
    if memo {
        adem_cache()
            .write()
            .expect("adem cache poisoned")
            .insert((p.get(), word.to_vec()), result.clone());
    }
    result
}

/// Rewrites into admissible form, leftmost inadmissible pair first.
pub fn adem_normalize(e: &SteenrodElement) -> SteenrodElement {
    adem_normalize_with(e, AdemStrategy::LeftmostFirst)
}

pub fn adem_normalize_with(e: &SteenrodElement, strategy: AdemStrategy) -> SteenrodElement {
    let p = e.prime;
    let mut out = SteenrodElement::zero(p).with_grading(e.grading);
    for (w, &c) in &e.terms {
        for (nw, v) in normalize_word(w.exponents(), p, strategy) {
            out.add_term(SteenrodWord(nw), p.mul(c, v));
        }
    }
    out
}

/// Applies `P^k` to a polynomial, expanding each monomial by the Cartan
/// formula over its variables.
pub fn act_power(k: u32, f: &Polynomial, spec: &ActionSpec) -> Result<Polynomial> {
    check_prime(spec, f)?;
    if k == 0 {
        return Ok(f.clone());
    }
    let mut out = Polynomial::zero(f.prime(), f.num_vars());
    let mut exps = vec![0u32; f.num_vars()];
    for (m, c) in f.raw_terms() {
        cartan(m.exponents(), 0, k, c, &mut exps, spec, &mut out);
    }
    Ok(out)
}

fn cartan(
    src: &[u32],
    idx: usize,
    remaining: u32,
    coeff: u32,
    exps: &mut Vec<u32>,
    spec: &ActionSpec,
    out: &mut Polynomial,
) {
    let p = spec.prime;
    let a = src[idx];
    let last = idx + 1 == src.len();
    let range = if last { remaining..=remaining } else { 0..=remaining };
    for ki in range {
        let c = spec.power_coefficient(a, ki);
        if c == 0 {
            continue;
        }
        let c = p.mul(coeff, c);
        exps[idx] = a + ki * spec.shift();
        if last {
            out.add_term(Monomial::new(exps.clone()), c);
        } else {
            cartan(src, idx + 1, remaining - ki, c, exps, spec, out);
        }
    }
}

fn check_prime(spec: &ActionSpec, f: &Polynomial) -> Result<()> {
    if spec.prime != f.prime() {
        return Err(Error::Mismatch(format!(
            "action over F_{} applied to a polynomial over F_{}",
            spec.prime,
            f.prime()
        )));
    }
    Ok(())
}

/// Action of an element; each word acts rightmost letter first.
pub fn act(e: &SteenrodElement, f: &Polynomial, spec: &ActionSpec) -> Result<Polynomial> {
    check_prime(spec, f)?;
    if e.prime != spec.prime {
        return Err(Error::Mismatch(format!(
            "element over F_{} with an action over F_{}",
            e.prime, spec.prime
        )));
    }
    let mut out = Polynomial::zero(f.prime(), f.num_vars());
    for (w, &c) in &e.terms {
        let mut cur = f.clone();
        for &k in w.exponents().iter().rev() {
            cur = act_power(k, &cur, spec)?;
            if cur.is_zero() {
                break;
            }
        }
        out.add_scaled(&cur, c);
    }
    Ok(out)
}

/// An element together with an action, usable as an operator on polynomials.
pub struct SteenrodOperator<'a> {
    pub element: &'a SteenrodElement,
    pub spec: ActionSpec,
}

impl PolyOperator for SteenrodOperator<'_> {
    fn apply_to(&self, f: &Polynomial) -> Result<Polynomial> {
        act(self.element, f, &self.spec)
    }
}

fn antipode_cache() -> &'static RwLock<HashMap<(u32, u32), RawCombination>> {
    static CACHE: OnceLock<RwLock<HashMap<(u32, u32), RawCombination>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `S(P^d) = -P^d - Σ_{i=1}^{d-1} P^i S(P^{d-i})`, in admissible form.
pub fn antipode_power(d: u32, p: Prime) -> SteenrodElement {
    let raw = antipode_power_raw(d, p);
    SteenrodElement::from_terms(p, raw.into_iter().map(|(w, c)| (SteenrodWord(w), c as i64)))
}

fn antipode_power_raw(d: u32, p: Prime) -> RawCombination {
    if d == 0 {
        return vec![(Vec::new(), 1)];
    }
    if let Some(hit) = antipode_cache().read().expect("antipode cache poisoned").get(&(p.get(), d)) {
        return hit.clone();
    }
    let minus_one = FpScalar::new(-1, p);
    let mut acc = SteenrodElement::power(p, d).scale(minus_one);
    for i in 1..d {
        let tail = antipode_power(d - i, p);
        acc = acc.add_scaled(&SteenrodElement::power(p, i).mul(&tail), minus_one);
    }
    let normal = adem_normalize(&acc);
    let raw: RawCombination = normal.terms.into_iter().map(|(w, c)| (w.0, c)).collect();
    antipode_cache()
        .write()
        .expect("antipode cache poisoned")
        .insert((p.get(), d), raw.clone());
    raw
}

/// The antipode, anti-multiplicative on words; returned in admissible form.
pub fn antipode(e: &SteenrodElement) -> SteenrodElement {
    let p = e.prime;
    let mut out = SteenrodElement::zero(p).with_grading(e.grading);
    for (w, &c) in &e.terms {
        let image = w
            .exponents()
            .iter()
            .fold(SteenrodElement::one(p), |acc, &a| antipode_power(a, p).mul(&acc));
        out = out.add_scaled(&adem_normalize(&image), FpScalar::new(c as i64, p));
    }
    out.with_grading(e.grading)
}

/// `s_i = Σ_{k+l=p-1} x_i^k x_{i+1}^l`.
pub fn s_polynomial(i: usize, n: usize, p: Prime) -> Result<Polynomial> {
    if i == 0 || i >= n {
        return Err(Error::Domain(format!("s_{i} needs 1 <= i < {n}")));
    }
    let pm1 = p.get() - 1;
    Ok(Polynomial::from_terms(
        p,
        n,
        (0..=pm1).map(|k| {
            let mut e = vec![0; n];
            e[i - 1] = k;
            e[i] = pm1 - k;
            (e, 1)
        }),
    ))
}

/// The operator `y ↦ Σ θ''(e(S(θ')(y)))` induced by `θ` on `End(P_n)`.
pub fn bar_operator(
    theta: &SteenrodElement,
    e: &NilHeckeElement,
    spec: ActionSpec,
) -> impl Fn(&Polynomial) -> Result<Polynomial> + Sync {
    let parts: Vec<(SteenrodElement, SteenrodElement, FpScalar)> = theta
        .coproduct()
        .into_iter()
        .map(|(l, r, c)| {
            let left = antipode(&SteenrodElement::word(theta.prime, l));
            (left, SteenrodElement::word(theta.prime, r), c)
        })
        .collect();
    let e = e.clone();
    move |y: &Polynomial| {
        let mut out = Polynomial::zero(y.prime(), y.num_vars());
        for (left, right, c) in &parts {
            let inner = act(left, y, &spec)?;
            if inner.is_zero() {
                continue;
            }
            let mid = e.apply_to(&inner)?;
            let image = act(right, &mid, &spec)?;
            out.add_scaled(&image, c.value());
        }
        Ok(out)
    }
}

/// The induced action of `θ` on a nilHecke element, reconstructed as a
/// nilHecke element and checked on monomials of degree at most `degree_bound`.
pub fn bar_act_element(
    theta: &SteenrodElement,
    e: &NilHeckeElement,
    spec: ActionSpec,
    degree_bound: u32,
) -> Result<NilHeckeElement> {
    if theta.prime != spec.prime || e.prime() != spec.prime {
        return Err(Error::Mismatch("bar action over different primes".into()));
    }
    let op = bar_operator(theta, e, spec);
    reconstruct(&op, spec.prime, e.num_vars(), degree_bound)
}

/// `P̄^n(e)`: the operator `y ↦ Σ_{i+j=n} P^j(e(S(P^i)(y)))`.
pub fn bar_act(n: u32, e: &NilHeckeElement, spec: ActionSpec, degree_bound: u32) -> Result<NilHeckeElement> {
    bar_act_element(&SteenrodElement::power(spec.prime, n), e, spec, degree_bound)
}

/// The recursion `d_1 = P^1`, `d_{i+1} = d_i P^{p^i} - P^{p^i} d_i`, in
/// admissible form. This is `(-1)^{t-1}` times the element dual to `ξ_t`.
pub fn margolis_recursion(t: u32, p: Prime) -> Result<SteenrodElement> {
    if t == 0 {
        return Err(Error::Domain("Margolis differentials start at d_1".into()));
    }
    let mut d = SteenrodElement::power(p, 1);
    for i in 1..t {
        let q = SteenrodElement::power(p, p.get().pow(i));
        d = adem_normalize(&d.mul(&q).sub(&q.mul(&d)));
    }
    Ok(d)
}

/// The primitive `d_t = P^0_t` dual to `ξ_t`, normalized so that
/// `d_t(x) = x^{p^t}`.
pub fn margolis_d(t: u32, p: Prime) -> Result<SteenrodElement> {
    let d = margolis_recursion(t, p)?;
    Ok(if t.is_multiple_of(2) { d.scale(FpScalar::new(-1, p)) } else { d })
}

/// `d_t` acting on a nilHecke element through the bar action.
pub fn margolis_bar(t: u32, e: &NilHeckeElement, spec: ActionSpec, degree_bound: u32) -> Result<NilHeckeElement> {
    let d = margolis_d(t, spec.prime)?;
    bar_act_element(&d, e, spec, degree_bound)
}

/// `d_t` acting on a nilHecke element as the commutator `[d_t, e]`, valid
/// because `d_t` is primitive.
pub fn margolis_commutator(t: u32, e: &NilHeckeElement, spec: ActionSpec, degree_bound: u32) -> Result<NilHeckeElement> {
    let d = margolis_d(t, spec.prime)?;
    let op = |y: &Polynomial| -> Result<Polynomial> {
        let lhs = act(&d, &e.apply_to(y)?, &spec)?;
        let rhs = e.apply_to(&act(&d, y, &spec)?)?;
        Ok(&lhs - &rhs)
    };
    reconstruct(&op, spec.prime, e.num_vars(), degree_bound)
}

/// A monomial `ξ_1^{e_1} ξ_2^{e_2} ...` in the dual Steenrod algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct DualMonomial(Vec<u32>);

impl DualMonomial {
    pub fn new(mut exponents: Vec<u32>) -> Self {
        while exponents.last() == Some(&0) {
            exponents.pop();
        }
        DualMonomial(exponents)
    }

    pub fn one() -> Self {
        DualMonomial(Vec::new())
    }

    /// `ξ_k^e`.
    pub fn xi_power(k: u32, e: u32) -> Self {
        assert!(k >= 1);
        let mut v = vec![0; k as usize];
        v[k as usize - 1] = e;
        Self::new(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self, grading: Grading, p: Prime) -> u64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| e as u64 * grading.xi_degree(i as u32 + 1, p))
            .sum()
    }

    fn mul(&self, other: &DualMonomial) -> DualMonomial {
        let len = self.0.len().max(other.0.len());
        let v = (0..len)
            .map(|i| self.0.get(i).unwrap_or(&0) + other.0.get(i).unwrap_or(&0))
            .collect();
        DualMonomial::new(v)
    }
}

impl fmt::Display for DualMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("xi{}", i + 1) } else { format!("xi{}^{e}", i + 1) })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// `φ(f)` for `f ∈ F_p[x]`, from `φ(x) = Σ_k x^{p^k} ⊗ ξ_k`, keeping dual
/// monomials of topological degree at most `degree_cap`.
pub fn milnor_coaction(f: &Polynomial, degree_cap: u64) -> Result<BTreeMap<DualMonomial, Polynomial>> {
    if f.num_vars() != 1 {
        return Err(Error::Domain("the coaction is implemented on one variable".into()));
    }
    let p = f.prime();
    let grading = Grading::Topological;
    let mut generator: Vec<(DualMonomial, u32)> = vec![(DualMonomial::one(), 1)];
    let mut k = 1;
    while grading.xi_degree(k, p) <= degree_cap {
        generator.push((DualMonomial::xi_power(k, 1), (p.get() as u64).pow(k) as u32));
        k += 1;
    }
    let mut out: BTreeMap<DualMonomial, Polynomial> = BTreeMap::new();
    for (m, c) in f.raw_terms() {
        let a = m.exponents()[0];
        // (Σ_k x^{p^k} ξ_k)^a, truncated: map dual monomial -> (x-exponent -> coefficient).
        let mut power: BTreeMap<DualMonomial, BTreeMap<u32, u32>> =
            BTreeMap::from([(DualMonomial::one(), BTreeMap::from([(0u32, 1u32)]))]);
        for _ in 0..a {
            let mut next: BTreeMap<DualMonomial, BTreeMap<u32, u32>> = BTreeMap::new();
            for (dm, xs) in &power {
                for (g, xe) in &generator {
                    let prod = dm.mul(g);
                    if prod.degree(grading, p) > degree_cap {
                        continue;
                    }
                    let slot = next.entry(prod).or_default();
                    for (&e, &v) in xs {
                        let s = slot.entry(e + xe).or_insert(0);
                        *s = p.add(*s, v);
                    }
                }
            }
            power = next;
        }
        for (dm, xs) in power {
            let entry = out.entry(dm).or_insert_with(|| Polynomial::zero(p, 1));
            for (e, v) in xs {
                entry.add_term(Monomial::new(vec![e]), p.mul(v, c));
            }
        }
    }
    out.retain(|_, poly| !poly.is_zero());
    Ok(out)
}

/// `P^s_t(f)`: the coefficient of `ξ_t^{p^s}` in `φ(f)`.
pub fn margolis_pst(s: u32, t: u32, f: &Polynomial) -> Result<Polynomial> {
    if t == 0 {
        return Err(Error::Domain("P^s_t needs t >= 1".into()));
    }
    let p = f.prime();
    let target = DualMonomial::xi_power(t, p.get().pow(s));
    let cap = target.degree(Grading::Topological, p);
    let coaction = milnor_coaction(f, cap)?;
    Ok(coaction.get(&target).cloned().unwrap_or_else(|| Polynomial::zero(p, 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(v: u32) -> Prime {
        Prime::new(v).unwrap()
    }

    fn word(p: u32, a: &[u32]) -> SteenrodElement {
        SteenrodElement::word(pr(p), SteenrodWord::new(a.to_vec()))
    }

    fn x(p: u32, n: usize, i: usize) -> Polynomial {
        Polynomial::var(pr(p), n, i)
    }

    #[test]
    fn adem_examples() {
        assert!(word(2, &[1, 1]).adem_normalize().is_zero());
        let got = word(3, &[1, 1]).adem_normalize();
        assert_eq!(got, SteenrodElement::power(pr(3), 2).scale(FpScalar::new(2, pr(3))));
        assert_eq!(got.to_string(), "2*P(2)");
        assert_eq!(word(3, &[3, 1]).adem_normalize(), word(3, &[3, 1]));
        assert_eq!(word(5, &[0, 2, 0]).adem_normalize(), SteenrodElement::power(pr(5), 2));
    }

    #[test]
    fn adem_examples_agree_as_operators() {
        for p in [2, 3] {
            let spec = ActionSpec::standard(pr(p));
            let raw = word(p, &[1, 1]);
            let normal = raw.adem_normalize();
            for m in Monomial::up_to_degree(2, 20) {
                let f = Polynomial::from_monomial(pr(p), m, 1);
                assert_eq!(act(&raw, &f, &spec).unwrap(), act(&normal, &f, &spec).unwrap());
            }
        }
    }

    #[test]
    fn act_examples() {
        for p in [2, 3, 5] {
            let spec = ActionSpec::standard(pr(p));
            let got = act(&SteenrodElement::power(pr(p), 1), &x(p, 2, 1), &spec).unwrap();
            assert_eq!(got, x(p, 2, 1).pow(p));
            let f = &x(p, 2, 1).pow(3) + &x(p, 2, 2);
            assert_eq!(act(&SteenrodElement::one(pr(p)), &f, &spec).unwrap(), f);
        }
        let spec = ActionSpec::nonstandard(pr(3));
        let got = act(&SteenrodElement::power(pr(3), 1), &x(3, 1, 1), &spec).unwrap();
        assert_eq!(got, x(3, 1, 1).pow(2).scale(FpScalar::new(2, pr(3))));
        assert!(act(&SteenrodElement::one(pr(3)), &x(5, 1, 1), &spec).is_err());
    }

    #[test]
    fn nonstandard_powers_follow_from_generator_rule() {
        // c(t)^a computed by naive convolution from the generator values.
        for p in [2u32, 3, 5] {
            let spec = ActionSpec::nonstandard(pr(p));
            let gen: Vec<u32> = (0..p).map(|k| spec.generator_coefficient(k)).collect();
            let mut series = vec![1u32];
            for a in 0..8u32 {
                for (k, &c) in series.iter().enumerate() {
                    assert_eq!(spec.power_coefficient(a, k as u32), c, "p={p} a={a} k={k}");
                }
                let mut next = vec![0u32; series.len() + gen.len() - 1];
                for (i, &s) in series.iter().enumerate() {
                    for (j, &g) in gen.iter().enumerate() {
                        next[i + j] = (next[i + j] + s * g) % p;
                    }
                }
                series = next;
            }
        }
    }

    #[test]
    fn antipode_examples() {
        let p = pr(3);
        assert_eq!(antipode(&SteenrodElement::one(p)), SteenrodElement::one(p));
        assert_eq!(
            antipode(&SteenrodElement::power(p, 1)),
            SteenrodElement::power(p, 1).scale(FpScalar::new(-1, p))
        );
        assert_eq!(antipode(&SteenrodElement::power(p, 2)), SteenrodElement::power(p, 2));
    }

    #[test]
    fn margolis_examples() {
        for p in [2, 3, 5] {
            let spec = ActionSpec::standard(pr(p));
            let d1 = margolis_d(1, pr(p)).unwrap();
            assert_eq!(act(&d1, &x(p, 1, 1), &spec).unwrap(), x(p, 1, 1).pow(p));
        }
        let d2 = margolis_d(2, pr(2)).unwrap();
        assert_eq!(act(&d2, &x(2, 1, 1), &ActionSpec::standard(pr(2))).unwrap(), x(2, 1, 1).pow(4));
        let d2 = margolis_d(2, pr(3)).unwrap();
        assert_eq!(act(&d2, &x(3, 1, 1), &ActionSpec::standard(pr(3))).unwrap(), x(3, 1, 1).pow(9));
        let raw = margolis_recursion(2, pr(3)).unwrap();
        assert_eq!(raw, d2.scale(FpScalar::new(-1, pr(3))));
        assert!(margolis_d(0, pr(2)).is_err());
    }

    #[test]
    fn bar_action_examples() {
        let p = pr(3);
        let spec = ActionSpec::standard(p);
        let d1 = NilHeckeElement::d(p, 2, 1);
        let got = bar_act(1, &d1, spec, 12).unwrap();
        let s = s_polynomial(1, 2, p).unwrap();
        assert_eq!(got, d1.left_mul_poly(&s).scale(FpScalar::new(-1, p)));
        assert_eq!(bar_act(0, &d1, spec, 12).unwrap(), d1);
        let x1 = NilHeckeElement::x(p, 2, 1);
        let got = bar_act(2, &x1, spec, 12).unwrap();
        let image = act(&SteenrodElement::power(p, 2), &x(3, 2, 1), &spec).unwrap();
        assert_eq!(got, NilHeckeElement::multiplication(&image));
        let via_bar = margolis_bar(1, &d1, spec, 12).unwrap();
        assert_eq!(via_bar, margolis_commutator(1, &d1, spec, 12).unwrap());
    }

    #[test]
    fn coaction_examples() {
        let p = pr(2);
        let xx = x(2, 1, 1);
        let phi = milnor_coaction(&xx, 30).unwrap();
        assert_eq!(phi.len(), 5);
        for k in 0..5u32 {
            let key = if k == 0 { DualMonomial::one() } else { DualMonomial::xi_power(k, 1) };
            assert_eq!(phi[&key], xx.pow(2u32.pow(k)));
        }
        let one = milnor_coaction(&Polynomial::one(p, 1), 30).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[&DualMonomial::one()], Polynomial::one(p, 1));
        for q in [2, 3] {
            let xq = x(q, 1, 1).pow(q);
            let phi = milnor_coaction(&xq, 200).unwrap();
            for (dm, poly) in &phi {
                let k = dm.exponents().len() as u32;
                if k > 0 {
                    assert_eq!(dm, &DualMonomial::xi_power(k, q));
                }
                assert_eq!(poly, &x(q, 1, 1).pow(q.pow(k + 1)));
            }
        }
    }

    #[test]
    fn pst_examples() {
        for p in [2, 3, 5] {
            let xx = x(p, 1, 1);
            assert_eq!(margolis_pst(0, 1, &xx).unwrap(), xx.pow(p));
            assert!(margolis_pst(1, 1, &xx).unwrap().is_zero());
        }
        assert!(margolis_pst(0, 2, &x(2, 1, 1).pow(2)).unwrap().is_zero());
    }

    #[test]
    fn display() {
        let e = word(5, &[2, 1]).add(&word(5, &[]).scale(FpScalar::new(3, pr(5))));
        assert_eq!(e.to_string(), "3 + P(2)*P(1)");
        assert_eq!(SteenrodElement::zero(pr(5)).to_string(), "0");
    }
}
