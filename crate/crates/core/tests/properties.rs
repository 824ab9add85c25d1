use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use steenrod_core::nilhecke::first_disagreement;
use steenrod_core::sample;
use steenrod_core::steenrod::{act, adem_normalize, antipode};
use steenrod_core::{ActionSpec, PolyOperator, Prime, SteenrodElement};

fn prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![2u32, 3, 5]).prop_map(|p| Prime::new(p).unwrap())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_laws(p in prime(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = sample::polynomial(&mut r, p, 3, 10, 4);
        let g = sample::polynomial(&mut r, p, 3, 10, 4);
        let h = sample::polynomial(&mut r, p, 3, 10, 4);
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert!((&f - &f).is_zero());
        prop_assert_eq!(f.pow(p.get()).transpose(1).unwrap(), f.transpose(1).unwrap().pow(p.get()));
    }

    #[test]
    fn nilhecke_product_is_composition(p in prime(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = sample::nh_element(&mut r, p, 3, 4, 2);
        let b = sample::nh_element(&mut r, p, 3, 4, 2);
        let composed = |f: &steenrod_core::Polynomial| a.apply_to(&b.apply_to(f)?);
        prop_assert_eq!(first_disagreement(&a.mul(&b), &composed, p, 3, 8).unwrap(), None);
    }

    #[test]
    fn nilhecke_normal_form_is_stable(p in prime(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let w = sample::nh_word_sum(&mut r, p, 3, 5, 3);
        let once = w.normalize();
        prop_assert_eq!(once.to_word_sum().normalize(), once);
    }

    #[test]
    fn adem_normal_form_is_admissible_and_stable(p in prime(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let e = SteenrodElement::word(p, sample::steenrod_word(&mut r, 4, 12));
        let n = adem_normalize(&e);
        prop_assert!(n.is_admissible());
        prop_assert_eq!(adem_normalize(&n), n);
    }

    #[test]
    fn antipode_is_an_involution(p in prime(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let e = adem_normalize(&SteenrodElement::word(p, sample::steenrod_word(&mut r, 2, 6)));
        prop_assert_eq!(adem_normalize(&antipode(&antipode(&e))), e);
    }

    #[test]
    fn action_is_multiplicative_in_the_algebra(p in prime(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = SteenrodElement::word(p, sample::steenrod_word(&mut r, 2, 4));
        let b = SteenrodElement::word(p, sample::steenrod_word(&mut r, 2, 4));
        let f = sample::polynomial(&mut r, p, 2, 6, 3);
        for spec in [ActionSpec::standard(p), ActionSpec::nonstandard(p)] {
            let lhs = act(&a.mul(&b), &f, &spec).unwrap();
            let rhs = act(&a, &act(&b, &f, &spec).unwrap(), &spec).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
