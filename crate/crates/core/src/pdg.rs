//! p-DG structures on `P_n` and `NH_n`: derivations of degree 2 with
//! `∂^p = 0`, their verification, and Margolis homology of graded
//! truncations.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{FpScalar, Prime};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::nilhecke::{defining_relations, reconstruct, NhLetter, NhWord, NhWordSum, NilHeckeElement, Permutation, PolyOperator};
use crate::poly::{Monomial, Polynomial};
use crate::sample;
use crate::steenrod::{act, bar_act, ActionSpec, SteenrodElement};

/// A derivation of `NH_n` determined by its values on `x_i` and `∂_i` and
/// extended by the Leibniz rule.
#[derive(Debug, Clone)]
pub struct Derivation {
    prime: Prime,
    num_vars: usize,
    name: String,
    x_images: Vec<Polynomial>,
    d_images: Vec<NilHeckeElement>,
    // ∂(∂_w) for every permutation w, by Leibniz along the reduced word.
    perm_images: BTreeMap<Permutation, NilHeckeElement>,
}

impl Derivation {
    /// `x_images[i-1] = ∂(x_i)`, `d_images[i-1] = ∂(∂_i)`.
    pub fn new(
        name: impl Into<String>,
        prime: Prime,
        num_vars: usize,
        x_images: Vec<Polynomial>,
        d_images: Vec<NilHeckeElement>,
    ) -> Result<Self> {
        if x_images.len() != num_vars || d_images.len() != num_vars.saturating_sub(1) {
            return Err(Error::Domain(format!(
                "a derivation of NH_{num_vars} needs {num_vars} variable images and {} operator images",
                num_vars.saturating_sub(1)
            )));
        }
        for f in &x_images {
            if f.prime() != prime || f.num_vars() != num_vars {
                return Err(Error::Mismatch("variable image lives in another ring".into()));
            }
        }
        for e in &d_images {
            if e.prime() != prime || e.num_vars() != num_vars {
                return Err(Error::Mismatch("operator image lives in another algebra".into()));
            }
        }
        let mut d = Derivation {
            prime,
            num_vars,
            name: name.into(),
            x_images,
            d_images,
            perm_images: BTreeMap::new(),
        };
        for w in Permutation::all(num_vars) {
            let letters: Vec<NhLetter> = w.reduced_word().iter().map(|&i| NhLetter::D(i)).collect();
            let image = d.apply_word(&NhWord::new(letters));
            d.perm_images.insert(w, image);
        }
        Ok(d)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn x_image(&self, i: usize) -> &Polynomial {
        &self.x_images[i - 1]
    }

    pub fn d_image(&self, i: usize) -> &NilHeckeElement {
        &self.d_images[i - 1]
    }

    /// `∂` on a polynomial: `∂(x^a) = Σ_i a_i x^{a - e_i} ∂(x_i)`.
    pub fn apply_poly(&self, f: &Polynomial) -> Polynomial {
        let p = self.prime;
        let mut out = Polynomial::zero(p, self.num_vars);
        for (m, c) in f.raw_terms() {
            for (i, &a) in m.exponents().iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let factor = p.mul(c, p.reduce(a as i64));
                if factor == 0 {
                    continue;
                }
                let mut e = m.exponents().to_vec();
                e[i] -= 1;
                out.add_scaled(&self.x_images[i].mul_monomial(&Monomial::new(e), 1), factor);
            }
        }
        out
    }

    fn letter_image(&self, letter: NhLetter) -> NilHeckeElement {
        match letter {
            NhLetter::X(i) => NilHeckeElement::multiplication(&self.x_images[i - 1]),
            NhLetter::D(i) => self.d_images[i - 1].clone(),
        }
    }

    /// `∂` on a raw word: `Σ_j a_1 ... ∂(a_j) ... a_k`, normalized.
    pub fn apply_word(&self, word: &NhWord) -> NilHeckeElement {
        let letters = word.letters();
        let mut out = NilHeckeElement::zero(self.prime, self.num_vars);
        for j in 0..letters.len() {
            // suffix a_{j+1} ... a_k
            let mut cur = NilHeckeElement::one(self.prime, self.num_vars);
            for &l in letters[j + 1..].iter().rev() {
                cur = cur.left_mul_letter(l);
            }
            cur = self.letter_image(letters[j]).mul(&cur);
            for &l in letters[..j].iter().rev() {
                cur = cur.left_mul_letter(l);
            }
            out = out.add(&cur);
        }
        out
    }

    pub fn apply_word_sum(&self, s: &NhWordSum) -> NilHeckeElement {
        let mut out = NilHeckeElement::zero(self.prime, self.num_vars);
        for (w, c) in s.terms() {
            out = out.add_scaled(&self.apply_word(w), c);
        }
        out
    }

    /// `∂(Σ f_w ∂_w) = Σ ∂(f_w) ∂_w + f_w ∂(∂_w)`.
    pub fn apply(&self, e: &NilHeckeElement) -> NilHeckeElement {
        let mut out = NilHeckeElement::zero(self.prime, self.num_vars);
        for (w, f) in e.parts() {
            out = out.add(&NilHeckeElement::term(&self.apply_poly(f), w.clone()));
            out = out.add(&self.perm_images[w].left_mul_poly(f));
        }
        out
    }

    pub fn apply_poly_power(&self, k: u32, f: &Polynomial) -> Polynomial {
        (0..k).fold(f.clone(), |acc, _| self.apply_poly(&acc))
    }

    pub fn apply_power(&self, k: u32, e: &NilHeckeElement) -> NilHeckeElement {
        (0..k).fold(e.clone(), |acc, _| self.apply(&acc))
    }
}

fn scalar(p: Prime, v: i64) -> FpScalar {
    FpScalar::new(v, p)
}

/// `∂(x_i) = x_i^2`, `∂(∂_i) = -(x_i + x_{i+1}) ∂_i`.
///
/// The sign on `∂_i` is the one for which the relation
/// `∂_i x_i - x_{i+1} ∂_i = 1` is preserved; it equals the commutator of
/// `∂_i` with the derivation `x_i ↦ x_i^2` of `P_n`.
pub fn khovanov_qi_derivation(prime: Prime, n: usize) -> Derivation {
    twisted_derivation(prime, n, 0).with_name("khovanov-qi")
}

/// `∂_a(x_i) = x_i^2`,
/// `∂_a(∂_i) = a - (a+1) x_i ∂_i + (a-1) x_{i+1} ∂_i`.
///
/// This is the standard structure transported along `f ↦ g f` with
/// `g = x_2^a x_3^{2a} ... x_n^{(n-1)a}`; the scalar `a` is `a` times the
/// identity.
pub fn twisted_derivation(prime: Prime, n: usize, a: i64) -> Derivation {
    let x_images = (1..=n).map(|i| Polynomial::var(prime, n, i).pow(2)).collect();
    let d_images = (1..n)
        .map(|i| {
            let xi = Polynomial::var(prime, n, i);
            let xj = Polynomial::var(prime, n, i + 1);
            let coeff = &xi.scale(scalar(prime, -(a + 1))) + &xj.scale(scalar(prime, a - 1));
            NilHeckeElement::term(&coeff, Permutation::simple(n, i))
                .add(&NilHeckeElement::one(prime, n).scale(scalar(prime, a)))
        })
        .collect();
    Derivation::new(format!("twisted(a={a})"), prime, n, x_images, d_images).expect("images are well formed")
}

/// The variant `∂(∂_i) = a + (a+1) x_i ∂_i + (a-1) x_{i+1} ∂_i`, which
/// respects the relations only when `p = 2`.
pub fn plus_sign_twisted_derivation(prime: Prime, n: usize, a: i64) -> Derivation {
    let x_images = (1..=n).map(|i| Polynomial::var(prime, n, i).pow(2)).collect();
    let d_images = (1..n)
        .map(|i| {
            let xi = Polynomial::var(prime, n, i);
            let xj = Polynomial::var(prime, n, i + 1);
            let coeff = &xi.scale(scalar(prime, a + 1)) + &xj.scale(scalar(prime, a - 1));
            NilHeckeElement::term(&coeff, Permutation::simple(n, i))
                .add(&NilHeckeElement::one(prime, n).scale(scalar(prime, a)))
        })
        .collect();
    Derivation::new(format!("plus-sign-twisted(a={a})"), prime, n, x_images, d_images).expect("images are well formed")
}

/// `d_1 = P^1` under the standard action: `x_i ↦ x_i^p`, with the value on
/// `∂_i` obtained from the induced action on operators.
pub fn steenrod_derivation(prime: Prime, n: usize) -> Result<Derivation> {
    let spec = ActionSpec::standard(prime);
    let x_images = (1..=n).map(|i| Polynomial::var(prime, n, i).pow(prime.get())).collect();
    let bound = (n * (n - 1)) as u32 + 2 * prime.get() + 4;
    let d_images = (1..n)
        .map(|i| bar_act(1, &NilHeckeElement::d(prime, n, i), spec, bound))
        .collect::<Result<Vec<_>>>()?;
    Derivation::new("steenrod-P1", prime, n, x_images, d_images)
}

impl Derivation {
    fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }
}

/// Outcome of [`verify_pdg`].
#[derive(Debug, Clone, Default, Serialize)]
pub struct PdgReport {
    pub leibniz_ok: bool,
    pub p_nilpotent_ok: bool,
    pub relations_ok: bool,
    pub failures: Vec<String>,
}

impl PdgReport {
    pub fn all_ok(&self) -> bool {
        self.leibniz_ok && self.p_nilpotent_ok && self.relations_ok
    }
}

/// Checks Leibniz on random products, `∂^p = 0` on `P_n` and on the basis
/// `x^a ∂_w` of `NH_n` with `2|a| ≤ degree_bound`, and compatibility with every
/// defining relation.
pub fn verify_pdg(d: &Derivation, degree_bound: u32, seed: u64, samples: usize) -> PdgReport {
    let p = d.prime;
    let n = d.num_vars;
    let mut report = PdgReport { leibniz_ok: true, p_nilpotent_ok: true, relations_ok: true, failures: Vec::new() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for _ in 0..samples {
        let f = sample::polynomial(&mut rng, p, n, degree_bound / 2, 3);
        let g = sample::polynomial(&mut rng, p, n, degree_bound / 2, 3);
        let lhs = d.apply_poly(&(&f * &g));
        let rhs = &(&d.apply_poly(&f) * &g) + &(&f * &d.apply_poly(&g));
        if lhs != rhs {
            report.leibniz_ok = false;
            report.failures.push(format!("Leibniz fails on polynomials {f} and {g}"));
            break;
        }
        let a = sample::nh_element(&mut rng, p, n, degree_bound / 4, 2);
        let b = sample::nh_element(&mut rng, p, n, degree_bound / 4, 2);
        let lhs = d.apply(&a.mul(&b));
        let rhs = d.apply(&a).mul(&b).add(&a.mul(&d.apply(&b)));
        if lhs != rhs {
            report.leibniz_ok = false;
            report.failures.push(format!("Leibniz fails on {a} and {b}"));
            break;
        }
    }

    let pp = p.get();
    for m in Monomial::up_to_degree(n, degree_bound) {
        let f = Polynomial::from_monomial(p, m.clone(), 1);
        if !d.apply_poly_power(pp, &f).is_zero() {
            report.p_nilpotent_ok = false;
            report.failures.push(format!("∂^{pp} does not vanish on {m}"));
            break;
        }
    }
    if report.p_nilpotent_ok {
        'outer: for w in Permutation::all(n) {
            for m in Monomial::up_to_degree(n, degree_bound) {
                let e = NilHeckeElement::term(&Polynomial::from_monomial(p, m.clone(), 1), w.clone());
                if !d.apply_power(pp, &e).is_zero() {
                    report.p_nilpotent_ok = false;
                    report.failures.push(format!("∂^{pp} does not vanish on {e}"));
                    break 'outer;
                }
            }
        }
    }

    for rel in defining_relations(p, n) {
        let lhs = d.apply_word_sum(&rel.lhs);
        let rhs = d.apply_word_sum(&rel.rhs);
        if lhs != rhs {
            report.relations_ok = false;
            report.failures.push(format!("relation {} is not preserved: {lhs} vs {rhs}", rel.name));
        }
    }
    report
}

/// A homogeneous linear endomorphism of a finite graded F_p-space, stored
/// as one matrix per source degree.
#[derive(Debug, Clone)]
pub struct GradedOperator {
    prime: Prime,
    shift: i64,
    dims: BTreeMap<i64, usize>,
    // blocks[k]: V_k -> V_{k+shift}, shape dim(V_{k+shift}) x dim(V_k).
    blocks: BTreeMap<i64, Matrix>,
}

impl GradedOperator {
    /// Builds from a graded basis and the image of each basis vector, given
    /// as coordinates in the basis of the target degree.
    pub fn from_basis<K, F>(prime: Prime, shift: i64, basis: &BTreeMap<i64, Vec<K>>, mut image: F) -> Self
    where
        K: Ord + Clone,
        F: FnMut(&K) -> BTreeMap<K, u32>,
    {
        let dims: BTreeMap<i64, usize> = basis.iter().map(|(&k, v)| (k, v.len())).collect();
        let mut blocks = BTreeMap::new();
        for (&deg, vectors) in basis {
            let target = basis.get(&(deg + shift));
            let rows = target.map_or(0, Vec::len);
            let mut m = Matrix::zeros(prime, rows, vectors.len());
            if let Some(target) = target {
                let index: BTreeMap<&K, usize> = target.iter().enumerate().map(|(i, k)| (k, i)).collect();
                for (c, v) in vectors.iter().enumerate() {
                    for (k, val) in image(v) {
                        if let Some(&r) = index.get(&k) {
                            m.set(r, c, val);
                        }
                    }
                }
            }
            blocks.insert(deg, m);
        }
        GradedOperator { prime, shift, dims, blocks }
    }

    /// `∂` on `P_n` modulo the span of monomials of degree above `top`.
    pub fn polynomial_truncation(d: &Derivation, top: u32) -> Self {
        let mut basis: BTreeMap<i64, Vec<Monomial>> = BTreeMap::new();
        for m in Monomial::up_to_degree(d.num_vars, top) {
            basis.entry(m.degree() as i64).or_default().push(m);
        }
        Self::from_basis(d.prime, 2, &basis, |m| {
            let image = d.apply_poly(&Polynomial::from_monomial(d.prime, m.clone(), 1));
            image.raw_terms().map(|(m, c)| (m.clone(), c)).collect()
        })
    }

    /// `∂` on `NH_n` modulo the span of `x^a ∂_w` of degree above `top`.
    pub fn nilhecke_truncation(d: &Derivation, top: i64) -> Self {
        let n = d.num_vars;
        let max_total = (top + (n * (n - 1)) as i64).max(0) as u32;
        let mut basis: BTreeMap<i64, Vec<(Monomial, Permutation)>> = BTreeMap::new();
        for w in Permutation::all(n) {
            for m in Monomial::up_to_degree(n, max_total) {
                let deg = m.degree() as i64 - 2 * w.length() as i64;
                if deg <= top {
                    basis.entry(deg).or_default().push((m, w.clone()));
                }
            }
        }
        Self::from_basis(d.prime, 2, &basis, |(m, w)| {
            let e = NilHeckeElement::term(&Polynomial::from_monomial(d.prime, m.clone(), 1), w.clone());
            d.apply(&e)
                .normal_form()
                .into_iter()
                .map(|(k, c)| (k, c.value()))
                .collect()
        })
    }

    /// The regular representation of `F_p[∂]/(∂^p)`: basis `v_0, ..., v_{p-1}`
    /// in degrees `0, 2, ..., 2(p-1)` with `∂ v_k = v_{k+1}`.
    pub fn free_cyclic(prime: Prime) -> Self {
        let basis: BTreeMap<i64, Vec<u32>> = (0..prime.get()).map(|k| (2 * k as i64, vec![k])).collect();
        Self::from_basis(prime, 2, &basis, |&k| BTreeMap::from([(k + 1, 1)]))
    }

    /// The zero map on a space with the given graded dimensions.
    pub fn zero(prime: Prime, shift: i64, dims: BTreeMap<i64, usize>) -> Self {
        let basis: BTreeMap<i64, Vec<usize>> = dims.iter().map(|(&k, &d)| (k, (0..d).collect())).collect();
        Self::from_basis(prime, shift, &basis, |_| BTreeMap::new())
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    /// The block `V_degree -> V_{degree + shift}`.
    pub fn block(&self, degree: i64) -> Matrix {
        self.blocks
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.prime, self.dim(degree + self.shift), self.dim(degree)))
    }

    /// `d^k` restricted to `V_degree`.
    pub fn power_block(&self, k: u32, degree: i64) -> Matrix {
        let mut acc = Matrix::identity(self.prime, self.dim(degree));
        let mut deg = degree;
        for _ in 0..k {
            acc = self.block(deg).mul(&acc);
            deg += self.shift;
        }
        acc
    }
}

/// Per-degree dimensions of a slash homology group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub s: u32,
    /// Nonzero dimensions only.
    pub dims: BTreeMap<i64, usize>,
    /// Degrees within `(p-1)·shift` of the top of the truncation, where
    /// classes may come from the cut rather than from the full module.
    pub boundary: Vec<i64>,
}

/// `ker d^s / im d^{p-s}` degree by degree; `s = p - 1` gives
/// `ker d^{p-1} / im d`.
pub fn margolis_homology(d: &GradedOperator, s: u32) -> Result<HomologyReport> {
    let p = d.prime.get();
    if s == 0 || s >= p {
        return Err(Error::Domain(format!("slash homology needs 1 <= s <= {}", p - 1)));
    }
    for &deg in d.dims.keys() {
        if !d.power_block(p, deg).is_zero() {
            return Err(Error::Structure(format!("d^{p} does not vanish in degree {deg}")));
        }
    }
    let mut dims = BTreeMap::new();
    for (&deg, &dim) in &d.dims {
        let ker = dim - d.power_block(s, deg).rank();
        let source = deg - (p - s) as i64 * d.shift;
        let im = if d.dim(source) == 0 { 0 } else { d.power_block(p - s, source).rank() };
        let h = ker - im;
        if h > 0 {
            dims.insert(deg, h);
        }
    }
    let top = d.dims.keys().next_back().copied().unwrap_or(0);
    let band = (p - 1) as i64 * d.shift;
    let boundary = d.dims.keys().copied().filter(|&k| k > top - band).collect();
    Ok(HomologyReport { s, dims, boundary })
}

/// How `P^1` under the nonstandard action compares with the standard
/// p-DG structure.
#[derive(Debug, Clone, Serialize)]
pub struct SignReport {
    /// `(generator, c)` with `bar P^1(g) = c ∂(g)`, `c ∈ {1, -1}`; `None`
    /// when both sides vanish or are not proportional.
    pub per_generator: Vec<(String, Option<i64>)>,
    /// The common sign, when every determined sign agrees.
    pub global_sign: Option<i64>,
    pub random_elements_ok: bool,
}

fn proportionality(lhs: &NilHeckeElement, rhs: &NilHeckeElement) -> Option<i64> {
    let p = lhs.prime();
    if lhs.is_zero() && rhs.is_zero() {
        return None;
    }
    if lhs == rhs {
        Some(1)
    } else if *lhs == rhs.scale(FpScalar::new(-1, p)) {
        Some(-1)
    } else {
        None
    }
}

/// Compares `P̄^1` (nonstandard action) with the derivation from
/// [`khovanov_qi_derivation`] on `1`, every `x_i`, every `∂_i` and random
/// elements.
pub fn compare_with_steenrod(prime: Prime, n: usize, degree_bound: u32, seed: u64, samples: usize) -> Result<SignReport> {
    let spec = ActionSpec::nonstandard(prime);
    let d = khovanov_qi_derivation(prime, n);
    let p1 = SteenrodElement::power(prime, 1);
    let bar1 = |e: &NilHeckeElement| -> Result<NilHeckeElement> {
        let op = |y: &Polynomial| -> Result<Polynomial> {
            let lhs = act(&p1, &e.apply_to(y)?, &spec)?;
            let rhs = e.apply_to(&act(&p1, y, &spec)?)?;
            Ok(&lhs - &rhs)
        };
        reconstruct(&op, prime, n, degree_bound)
    };
    let mut per_generator = Vec::new();
    let one = NilHeckeElement::one(prime, n);
    per_generator.push(("1".to_string(), proportionality(&bar1(&one)?, &d.apply(&one))));
    for i in 1..=n {
        let x = NilHeckeElement::x(prime, n, i);
        per_generator.push((format!("x{i}"), proportionality(&bar1(&x)?, &d.apply(&x))));
    }
    for i in 1..n {
        let di = NilHeckeElement::d(prime, n, i);
        per_generator.push((format!("D{i}"), proportionality(&bar1(&di)?, &d.apply(&di))));
    }
    let signs: Vec<i64> = per_generator.iter().filter_map(|(_, s)| *s).collect();
    let global_sign = match signs.first() {
        Some(&s) if signs.iter().all(|&t| t == s) => Some(s),
        _ => None,
    };
    let mut random_elements_ok = true;
    if let Some(sign) = global_sign {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = FpScalar::new(sign, prime);
        for _ in 0..samples {
            let e = sample::nh_element(&mut rng, prime, n, degree_bound / 4, 2);
            if bar1(&e)? != d.apply(&e).scale(c) {
                random_elements_ok = false;
                break;
            }
        }
    }
    Ok(SignReport { per_generator, global_sign, random_elements_ok })
}

/// `[∂_a, ∂_i]` computed by transporting the standard structure to the
/// ideal generated by `g = x_2^a x_3^{2a} ... x_n^{(n-1)a}`: the operator
/// `y ↦ g^{-1} ∂(g ∂_i y) - ∂_i(g^{-1} ∂(g y))`, reconstructed in `NH_n`.
pub fn conjugated_twist_image(prime: Prime, n: usize, a: u32, i: usize, degree_bound: u32) -> Result<NilHeckeElement> {
    let standard = khovanov_qi_derivation(prime, n);
    let g = Polynomial::from_monomial(prime, Monomial::new((0..n).map(|j| j as u32 * a).collect()), 1);
    let di = NilHeckeElement::d(prime, n, i);
    let twisted = |y: &Polynomial| -> Result<Polynomial> { standard.apply_poly(&(&g * y)).exact_divide(&g) };
    let op = |y: &Polynomial| -> Result<Polynomial> {
        let lhs = twisted(&di.apply_to(y)?)?;
        let rhs = di.apply_to(&twisted(y)?)?;
        Ok(&lhs - &rhs)
    };
    reconstruct(&op, prime, n, degree_bound)
}
