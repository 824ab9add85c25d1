//! Exact computations with the mod-p Steenrod algebra acting on polynomial
//! rings and nilHecke algebras, p-DG structures and graded dimensions of
//! finite sub-Hopf algebras.

pub mod arith;
pub mod error;
pub mod groth;
pub mod linalg;
pub mod nilhecke;
pub mod pdg;
pub mod poly;
pub mod sample;
pub mod steenrod;
pub mod verify;

pub use arith::{FpScalar, IntPolynomial, Prime};
pub use error::{Error, Result};
pub use nilhecke::{NhLetter, NhWord, NhWordSum, NilHeckeElement, Permutation, PolyOperator};
pub use poly::{Monomial, Polynomial};
pub use steenrod::{ActionKind, ActionSpec, Grading, SteenrodElement, SteenrodWord};
