//! Fixed workloads shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use steenrod_core::{sample, NhWordSum, Polynomial, Prime, SteenrodElement, SteenrodWord};

pub fn prime(p: u32) -> Prime {
    Prime::new(p).expect("benchmark primes are prime")
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random words `P(a)*P(b)*P(c)` with exponents at most `max_exp`.
pub fn steenrod_words(p: Prime, count: usize, max_exp: u32) -> Vec<SteenrodElement> {
    let mut r = rng(1);
    (0..count)
        .map(|_| SteenrodElement::word(p, sample::steenrod_word(&mut r, 3, max_exp)))
        .collect()
}

/// `(x_1 + ... + x_n)^e`, a dense homogeneous polynomial.
pub fn dense_polynomial(p: Prime, n: usize, e: u32) -> Polynomial {
    (1..=n).fold(Polynomial::zero(p, n), |acc, i| &acc + &Polynomial::var(p, n, i)).pow(e)
}

pub fn nilhecke_words(p: Prime, n: usize, count: usize, len: usize) -> Vec<NhWordSum> {
    let mut r = rng(2);
    (0..count).map(|_| sample::nh_word_sum(&mut r, p, n, len, 3)).collect()
}

pub fn steenrod_word(exponents: &[u32]) -> SteenrodWord {
    SteenrodWord::new(exponents.to_vec())
}
