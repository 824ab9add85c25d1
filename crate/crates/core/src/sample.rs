//! Seeded random generators for the randomized verification suites.

use rand::Rng;

use crate::arith::Prime;
use crate::nilhecke::{NhLetter, NhWord, NhWordSum, NilHeckeElement, Permutation};
use crate::poly::{Monomial, Polynomial};
use crate::steenrod::SteenrodWord;

/// A polynomial with up to `max_terms` terms of degree at most `degree_bound`.
pub fn polynomial<R: Rng>(rng: &mut R, prime: Prime, num_vars: usize, degree_bound: u32, max_terms: usize) -> Polynomial {
    let mut f = Polynomial::zero(prime, num_vars);
    let terms = rng.gen_range(1..=max_terms.max(1));
    for _ in 0..terms {
        let total = rng.gen_range(0..=degree_bound / 2);
        f = &f + &Polynomial::from_monomial(prime, monomial(rng, num_vars, total), rng.gen_range(1..prime.get()) as i64);
    }
    f
}

/// A uniformly random exponent vector with the given total exponent.
pub fn monomial<R: Rng>(rng: &mut R, num_vars: usize, total: u32) -> Monomial {
    let mut e = vec![0u32; num_vars];
    for _ in 0..total {
        e[rng.gen_range(0..num_vars)] += 1;
    }
    Monomial::new(e)
}

/// A word of the given length in the generators of `NH_n`.
pub fn nh_word<R: Rng>(rng: &mut R, num_vars: usize, len: usize) -> NhWord {
    let letters = (0..len)
        .map(|_| {
            if num_vars < 2 || rng.gen_bool(0.5) {
                NhLetter::X(rng.gen_range(1..=num_vars))
            } else {
                NhLetter::D(rng.gen_range(1..num_vars))
            }
        })
        .collect();
    NhWord::new(letters)
}

/// A sum of up to `max_terms` random words of length at most `max_len`.
pub fn nh_word_sum<R: Rng>(rng: &mut R, prime: Prime, num_vars: usize, max_len: usize, max_terms: usize) -> NhWordSum {
    let mut s = NhWordSum::zero(prime, num_vars);
    for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
        let len = rng.gen_range(0..=max_len);
        let c = crate::arith::FpScalar::new(rng.gen_range(1..prime.get()) as i64, prime);
        s.push(nh_word(rng, num_vars, len), c).expect("letters in range");
    }
    s
}

/// A normal-form element `Σ f_w ∂_w` with random coefficients of degree at
/// most `degree_bound`.
pub fn nh_element<R: Rng>(rng: &mut R, prime: Prime, num_vars: usize, degree_bound: u32, max_terms: usize) -> NilHeckeElement {
    let perms = Permutation::all(num_vars);
    let mut e = NilHeckeElement::zero(prime, num_vars);
    for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
        let w = perms[rng.gen_range(0..perms.len())].clone();
        let f = polynomial(rng, prime, num_vars, degree_bound, 2);
        e = e.add(&NilHeckeElement::term(&f, w));
    }
    e
}

/// A Steenrod word of length at most `max_len` with exponents at most `max_exp`.
pub fn steenrod_word<R: Rng>(rng: &mut R, max_len: usize, max_exp: u32) -> SteenrodWord {
    let len = rng.gen_range(1..=max_len.max(1));
    SteenrodWord::new((0..len).map(|_| rng.gen_range(0..=max_exp)).collect())
}
