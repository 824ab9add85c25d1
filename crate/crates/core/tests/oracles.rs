use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_traits::{One, Signed, ToPrimitive, Zero};

use steenrod_core::arith::{binomial_mod_p, cyclotomic, divisors, factor_quotient, generalized_binomial, q_quotient};
use steenrod_core::nilhecke::{divided_difference, normalize, reconstruct, schubert};
use steenrod_core::pdg::{khovanov_qi_derivation, margolis_homology, GradedOperator};
use steenrod_core::steenrod::{act_power, adem_normalize, adem_relation, antipode_power};
use steenrod_core::{
    ActionSpec, IntPolynomial, Monomial, NhLetter, NhWord, NhWordSum, NilHeckeElement, Permutation, Polynomial, Prime,
    SteenrodElement, SteenrodWord,
};

const PRIMES: [u32; 4] = [2, 3, 5, 7];

fn pr(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

fn big_binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        BigUint::zero()
    } else {
        binomial(BigUint::from(n), BigUint::from(k))
    }
}

fn mod_p(v: &BigInt, p: u32) -> u32 {
    let m = BigInt::from(p);
    (((v % &m) + &m) % &m).to_u32().unwrap()
}

/// Dense integer polynomial in one variable.
fn dense_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn dense_pow(a: &[BigInt], e: u32) -> Vec<BigInt> {
    (0..e).fold(vec![BigInt::one()], |acc, _| dense_mul(&acc, a))
}

#[test]
fn binomials_match_exact_integers() {
    for p in PRIMES {
        for n in 0..60u64 {
            for k in 0..=n + 2 {
                let exact = mod_p(&BigInt::from(big_binomial(n, k)), p);
                assert_eq!(binomial_mod_p(n as i64, k as i64, pr(p)).unwrap().value(), exact, "C({n},{k}) mod {p}");
            }
        }
    }
}

#[test]
fn negative_binomials_match_series_coefficients() {
    // (1+x)^{-n} = Σ (-1)^k C(n+k-1, k) x^k
    for p in PRIMES {
        for n in 1..20u64 {
            for k in 0..20u64 {
                let mut v = BigInt::from(big_binomial(n + k - 1, k));
                if k % 2 == 1 {
                    v = -v;
                }
                assert_eq!(binomial_mod_p(-(n as i64), k as i64, pr(p)).unwrap().value(), mod_p(&v, p));
            }
        }
    }
}

#[test]
fn generalized_binomial_matches_expansion() {
    for p in [2, 3, 5] {
        let base = vec![BigInt::one(); p as usize];
        for n in 0..8u32 {
            let expanded = dense_pow(&base, n);
            for k in 0..expanded.len() as u64 + 3 {
                let exact = expanded.get(k as usize).cloned().unwrap_or_default();
                assert_eq!(generalized_binomial(n as u64, k, pr(p)).value(), mod_p(&exact, p), "n={n} k={k} p={p}");
            }
        }
    }
}

#[test]
fn cyclotomic_products_give_x_n_minus_one() {
    for n in 1..=40 {
        let product = divisors(n).into_iter().fold(IntPolynomial::one(), |acc, d| &acc * &cyclotomic(d));
        let expected = &IntPolynomial::monomial(1, n) - &IntPolynomial::one();
        assert_eq!(product, expected, "n = {n}");
    }
    assert_eq!(cyclotomic(12), IntPolynomial::from_coeffs([1, 0, -1, 0, 1]));
    assert_eq!(cyclotomic(4).to_string(), "1+q^2");
}

#[test]
fn q_quotients_invert_their_denominators() {
    for k in 1..=6 {
        for m in (k..=36).step_by(k as usize) {
            let q = q_quotient(m, k).unwrap();
            let denominator = &IntPolynomial::one() - &IntPolynomial::monomial(1, k);
            let numerator = &IntPolynomial::one() - &IntPolynomial::monomial(1, m);
            assert_eq!(&q * &denominator, numerator);
            let product = factor_quotient(m, k)
                .unwrap()
                .into_iter()
                .fold(IntPolynomial::one(), |acc, (d, mult)| (0..mult).fold(acc, |a, _| &a * &cyclotomic(d)));
            assert_eq!(product, q, "({m}, {k})");
            assert!(q.terms().all(|(_, c)| !c.is_negative()));
        }
    }
    assert!(q_quotient(12, 5).is_err());
}

/// P^k(x^a) from the total operation x ↦ x + x^p, expanded over the integers.
fn standard_total_power(a: u32, k: u32, p: u32) -> (u32, u32) {
    let mut base = vec![BigInt::zero(); p as usize + 1];
    base[1] = BigInt::one();
    base[p as usize] += BigInt::one();
    let expanded = dense_pow(&base, a);
    let deg = a + k * (p - 1);
    (deg, mod_p(expanded.get(deg as usize).unwrap_or(&BigInt::zero()), p))
}

/// P^k(x^a) from x ↦ x(1+x)^{p-1}, expanded over the integers.
fn nonstandard_total_power(a: u32, k: u32, p: u32) -> (u32, u32) {
    let one_plus_x = vec![BigInt::one(), BigInt::one()];
    let base = dense_mul(&[BigInt::zero(), BigInt::one()], &dense_pow(&one_plus_x, p - 1));
    let expanded = dense_pow(&base, a);
    let deg = a + k;
    (deg, mod_p(expanded.get(deg as usize).unwrap_or(&BigInt::zero()), p))
}

#[test]
fn actions_on_one_variable_match_total_operations() {
    for p in [2, 3, 5] {
        let x = Polynomial::var(pr(p), 1, 1);
        for a in 0..12 {
            for k in 0..8 {
                for (spec, oracle) in [
                    (ActionSpec::standard(pr(p)), standard_total_power as fn(u32, u32, u32) -> (u32, u32)),
                    (ActionSpec::nonstandard(pr(p)), nonstandard_total_power),
                ] {
                    let (deg, c) = oracle(a, k, p);
                    let expected = Polynomial::from_monomial(pr(p), Monomial::new(vec![deg]), c as i64);
                    assert_eq!(act_power(k, &x.pow(a), &spec).unwrap(), expected, "P^{k}(x^{a}) p={p} {:?}", spec.kind);
                }
            }
        }
    }
}

/// The textbook Adem coefficients, from exact integer binomials.
fn adem_oracle(a: u32, b: u32, p: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for i in 0..=a / p {
        let top = (p - 1) as i64 * (b - i) as i64 - 1;
        let bottom = (a - p * i) as i64;
        let c = if top < 0 {
            if bottom == 0 { BigInt::one() } else { BigInt::zero() }
        } else {
            BigInt::from(big_binomial(top as u64, bottom as u64))
        };
        let c = if (a + i) % 2 == 1 { -c } else { c };
        let v = mod_p(&c, p);
        if v != 0 {
            out.push((a + b - i, i, v));
        }
    }
    out
}

#[test]
fn adem_relations_match_textbook_coefficients() {
    for p in [2, 3, 5] {
        for b in 1..10 {
            for a in 1..p * b {
                let mut got: Vec<(u32, u32, u32)> =
                    adem_relation(a, b, pr(p)).into_iter().filter(|t| !t.2.is_zero()).map(|(x, y, c)| (x, y, c.value())).collect();
                got.sort();
                let mut expected = adem_oracle(a, b, p);
                expected.sort();
                assert_eq!(got, expected, "P^{a}P^{b} at p = {p}");
            }
        }
    }
}

#[test]
fn adem_small_products() {
    let e = SteenrodElement::word(pr(3), SteenrodWord::new(vec![1, 1]));
    assert_eq!(adem_normalize(&e).to_string(), "2*P(2)");
    let e = SteenrodElement::word(pr(3), SteenrodWord::new(vec![1, 2]));
    assert!(adem_normalize(&e).is_zero());
    let e = SteenrodElement::word(pr(2), SteenrodWord::new(vec![1, 1]));
    assert!(adem_normalize(&e).is_zero());
}

#[test]
fn antipode_low_degrees() {
    for p in [2, 3, 5] {
        let minus_one = steenrod_core::FpScalar::new(-1, pr(p));
        assert_eq!(antipode_power(1, pr(p)), SteenrodElement::power(pr(p), 1).scale(minus_one));
    }
}

#[test]
fn divided_differences_satisfy_defining_identity() {
    let p = pr(5);
    let f = &(&Polynomial::var(p, 3, 1).pow(3) * &Polynomial::var(p, 3, 2)) + &Polynomial::var(p, 3, 3).pow(2);
    for i in 1..3 {
        let d = divided_difference(&f, i).unwrap();
        let root = &Polynomial::var(p, 3, i) - &Polynomial::var(p, 3, i + 1);
        assert_eq!(&root * &d, &f - &f.transpose(i).unwrap());
    }
}

#[test]
fn schubert_polynomials_in_three_variables() {
    let p = pr(3);
    let x = |i| Polynomial::var(p, 3, i);
    let cases = [
        (vec![1, 2, 3], Polynomial::one(p, 3)),
        (vec![2, 1, 3], x(1)),
        (vec![1, 3, 2], &x(1) + &x(2)),
        (vec![2, 3, 1], &x(1) * &x(2)),
        (vec![3, 1, 2], x(1).pow(2)),
        (vec![3, 2, 1], &x(1).pow(2) * &x(2)),
    ];
    for (images, expected) in cases {
        let w = Permutation::from_images(images.clone()).unwrap();
        assert_eq!(schubert(&w, p), expected, "{images:?}");
    }
}

#[test]
fn reconstruction_recovers_a_commuted_word() {
    let p = pr(3);
    // ∂_1 x_2 = x_1 ∂_1 - 1
    let op = |f: &Polynomial| divided_difference(&(&Polynomial::var(p, 2, 2) * f), 1);
    let got = reconstruct(&op, p, 2, 12).unwrap();
    let expected = NilHeckeElement::x(p, 2, 1).mul(&NilHeckeElement::d(p, 2, 1)).sub(&NilHeckeElement::one(p, 2));
    assert_eq!(got, expected);
    let word = NhWordSum::word(p, 2, NhWord::new(vec![NhLetter::D(1), NhLetter::X(2)])).unwrap();
    assert_eq!(normalize(&word), expected);
}

#[test]
fn truncated_homology_example() {
    let two = pr(2);
    let op = GradedOperator::polynomial_truncation(&khovanov_qi_derivation(two, 1), 6);
    let h = margolis_homology(&op, 1).unwrap();
    assert_eq!(h.dims.into_iter().collect::<Vec<_>>(), vec![(0, 1), (6, 1)]);
    for p in [2, 3, 5] {
        let free = GradedOperator::free_cyclic(pr(p));
        assert!(margolis_homology(&free, p - 1).unwrap().dims.is_empty());
    }
}
