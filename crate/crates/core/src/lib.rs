pub mod conway;
pub mod error;
pub mod exactalg;
pub mod gauss_forms;
pub mod harness;
pub mod induction;
pub mod jones;
pub mod obstruction;
pub mod registry;
pub mod seifert;
pub mod torus_sig;

pub use conway::{parse, ConwayForm, Fraction, Move};
pub use error::{Error, Result};
pub use exactalg::{LaurentPolynomial, Rational};
