//! Exact arithmetic: rationals, F_q scalars, binary forms and dense linear
//! algebra over F_q.

mod field;
mod form;
mod matrix;
mod rational;

pub use field::{Fp, PrimeField, DEFAULT_PRIME};
pub use form::{form_determinant, multiplication_matrix, vanishing_divisor_degree, BinaryForm};
pub use matrix::FieldMatrix;
pub use rational::Rational;
