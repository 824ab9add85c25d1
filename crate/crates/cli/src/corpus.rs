//! Random well-formed expressions, for round-trip testing of the parser.

use rand::Rng;

use crate::expr::{Atom, Expr, Factor, Sign, Target, Term};

pub fn random_expr<R: Rng>(rng: &mut R, target: Target, depth: u32) -> Expr {
    let terms = (0..rng.gen_range(1..=4))
        .map(|i| {
            let sign = if (i == 0 && rng.gen_bool(0.2)) || (i > 0 && rng.gen_bool(0.5)) { Sign::Minus } else { Sign::Plus };
            (sign, random_term(rng, target, depth))
        })
        .collect();
    Expr { terms }
}

fn random_term<R: Rng>(rng: &mut R, target: Target, depth: u32) -> Term {
    let factors = (0..rng.gen_range(1..=3))
        .map(|_| Factor {
            atom: random_atom(rng, target, depth),
            exponent: rng.gen_bool(0.25).then(|| rng.gen_range(0..4)),
        })
        .collect();
    Term { factors }
}

fn random_atom<R: Rng>(rng: &mut R, target: Target, depth: u32) -> Atom {
    if depth > 0 && rng.gen_bool(0.15) {
        return Atom::Group(Box::new(random_expr(rng, target, depth - 1)));
    }
    if rng.gen_bool(0.2) {
        return Atom::Int(rng.gen_range(0..30));
    }
    match target {
        Target::Steenrod => Atom::P(rng.gen_range(0..13)),
        Target::Polynomial | Target::NilHecke => {
            let choices = if target == Target::NilHecke { 4 } else { 3 };
            match rng.gen_range(0..choices) {
                0 => Atom::X(rng.gen_range(1..=5)),
                1 => Atom::E(rng.gen_range(1..=4)),
                2 => Atom::PowerSum(rng.gen_range(1..=5)),
                _ => Atom::D(rng.gen_range(1..=4)),
            }
        }
    }
}
