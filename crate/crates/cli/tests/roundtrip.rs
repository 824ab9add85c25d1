use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use steenrod_cli::corpus::random_expr;
use steenrod_cli::expr::{eval_nilhecke, eval_polynomial, eval_steenrod, parse, render, Target};
use steenrod_core::{Grading, Prime};

#[test]
fn render_then_parse_is_identity() {
    for (target, seed) in [(Target::Polynomial, 11), (Target::NilHecke, 12), (Target::Steenrod, 13)] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let e = random_expr(&mut rng, target, 3);
            let text = render(&e);
            assert_eq!(parse(&text, target).unwrap(), e, "{text}");
        }
    }
}

#[test]
fn printed_results_parse_back_to_the_same_value() {
    let p = Prime::new(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..200 {
        let e = random_expr(&mut rng, Target::Polynomial, 1);
        let Ok(f) = eval_polynomial(&e, p, 5) else { continue };
        let back = eval_polynomial(&parse(&f.to_string(), Target::Polynomial).unwrap(), p, 5).unwrap();
        assert_eq!(back, f);
    }
    for _ in 0..100 {
        let e = random_expr(&mut rng, Target::NilHecke, 0);
        let Ok(a) = eval_nilhecke(&e, p, 5) else { continue };
        let back = eval_nilhecke(&parse(&a.to_string(), Target::NilHecke).unwrap(), p, 5).unwrap();
        assert_eq!(back, a);
    }
    for _ in 0..200 {
        let e = random_expr(&mut rng, Target::Steenrod, 1);
        let a = steenrod_core::steenrod::adem_normalize(&eval_steenrod(&e, p, Grading::Topological).unwrap());
        let back = eval_steenrod(&parse(&a.to_string(), Target::Steenrod).unwrap(), p, Grading::Topological).unwrap();
        assert_eq!(back, a);
    }
}
