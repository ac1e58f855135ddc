//! Kauffman bracket of the Conway diagram, the Jones polynomial and the
//! degree-three invariant `v_3`.
//!
//! The diagram `C[2b_g, 2c_g, ..., 2b_1, 2c_1]` is the numerator closure
//! of the rational tangle obtained from the `[inf]` tangle by `|2c_1|`
//! vertical twists, `2b_1` horizontal twists, `|2c_2|` vertical twists and
//! so on, ending with `2b_g` horizontal twists. Its fraction is
//! `2b_g + 1/(2c_g + ... + 1/(2c_1))`.

mod bracket;
mod state_sum;

use num_bigint::BigInt;

use crate::conway::ConwayForm;
use crate::error::{Error, Result};
use crate::exactalg::{LaurentPolynomial, Rational};

pub use bracket::{kauffman_bracket, loop_value, BracketState, Twist};
pub use state_sum::{kauffman_bracket_state_sum, STATE_SUM_MAX_CROSSINGS};

/// Writhe of the positive Conway diagram: every crossing counts `+1`.
pub fn writhe(k: &ConwayForm) -> i64 {
    k.crossing_count()
}

/// `f = (-A^3)^{-w} <D>` followed by `A = t^{-1/4}`.
pub fn jones_from_bracket(bracket: &LaurentPolynomial, writhe: i64) -> Result<LaurentPolynomial> {
    let sign = if writhe % 2 == 0 { 1 } else { -1 };
    let normalized = bracket.shift(-3 * writhe).scale(&BigInt::from(sign));
    // A^e = t^{-e/4}
    normalized.substitute_power(-1).divide_exponents(4).ok_or_else(|| {
        Error::Internal(format!(
            "normalized bracket {normalized} has exponents not divisible by 4; \
                 the writhe or orientation convention is inconsistent"
        ))
    })
}

pub fn jones_polynomial(k: &ConwayForm) -> Result<LaurentPolynomial> {
    jones_from_bracket(&kauffman_bracket(k), writhe(k))
}

/// `v_3 = -V'''(1)/144 - V''(1)/48`.
pub fn v3_from_polynomial(v: &LaurentPolynomial) -> Rational {
    let d2 = v.derivative().derivative();
    let d3 = d2.derivative();
    let third = Rational::new(-d3.eval_at_one(), BigInt::from(144));
    let second = Rational::new(-d2.eval_at_one(), BigInt::from(48));
    third + second
}

pub fn v3_from_jones(k: &ConwayForm) -> Result<Rational> {
    Ok(v3_from_polynomial(&jones_polynomial(k)?))
}
