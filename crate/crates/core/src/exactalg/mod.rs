//! Exact arithmetic: big integers, reduced rationals and sparse Laurent
//! polynomials with integer coefficients.

mod laurent;
mod rational;

pub use laurent::LaurentPolynomial;
pub(crate) use rational::{ratio, serialize_bigint, serialize_bigint_matrix, serialize_rational};
pub use rational::{rational_to_string, Rational};

pub use num_bigint::BigInt;
