use crate::conway::ConwayForm;
use crate::exactalg::LaurentPolynomial;

/// `delta = -A^2 - A^-2`, the value of a disjoint trivial loop.
pub fn loop_value() -> LaurentPolynomial {
    LaurentPolynomial::from_terms([(2, -1), (-2, -1)])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Twist {
    /// Crossing added to the right (east) of the tangle.
    Horizontal,
    /// Crossing added below (south of) the tangle.
    Vertical,
}

/// Bracket of a rational tangle in the skein basis `<0>` (`=`) and
/// `<inf>` (`)(`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketState {
    pub zero: LaurentPolynomial,
    pub inf: LaurentPolynomial,
}

impl BracketState {
    /// The `[inf]` tangle: two vertical arcs.
    pub fn infinity() -> Self {
        Self {
            zero: LaurentPolynomial::zero(),
            inf: LaurentPolynomial::one(),
        }
    }

    /// A single crossing of fraction `+1` (`positive`) or `-1`. The
    /// A-smoothing of the `+1` crossing is `)(`, so that the positive
    /// orientation of every Conway diagram gives writhe `+n`.
    pub fn crossing(positive: bool) -> Self {
        let a = LaurentPolynomial::monomial(1, 1);
        let a_inv = LaurentPolynomial::monomial(1, -1);
        if positive {
            Self { zero: a_inv, inf: a }
        } else {
            Self { zero: a, inf: a_inv }
        }
    }

    /// Tangle sum `self + x`.
    pub fn add(&self, x: &Self) -> Self {
        let delta = loop_value();
        let zero = &self.zero * &x.zero;
        let inf = &(&self.zero * &x.inf) + &(&self.inf * &x.zero);
        let inf = &inf + &(&delta * &(&self.inf * &x.inf));
        Self { zero, inf }
    }

    /// Tangle product `self * x` (vertical stacking).
    pub fn stack(&self, x: &Self) -> Self {
        let delta = loop_value();
        let inf = &self.inf * &x.inf;
        let zero = &(&self.inf * &x.zero) + &(&self.zero * &x.inf);
        let zero = &zero + &(&delta * &(&self.zero * &x.zero));
        Self { zero, inf }
    }

    pub fn twist(&self, kind: Twist, positive: bool) -> Self {
        let x = Self::crossing(positive);
        match kind {
            Twist::Horizontal => self.add(&x),
            Twist::Vertical => self.stack(&x),
        }
    }

    /// Numerator closure: `N(<0>) = delta`, `N(<inf>) = 1`.
    pub fn numerator(&self) -> LaurentPolynomial {
        &(&self.zero * &loop_value()) + &self.inf
    }
}

/// Twist sequence building the Conway diagram from `[inf]`, innermost first.
pub(crate) fn twist_sequence(k: &ConwayForm) -> Vec<(Twist, bool)> {
    let mut seq = Vec::with_capacity(k.crossing_count() as usize);
    for (&b, &c) in k.bs().iter().zip(k.cs()) {
        seq.extend(std::iter::repeat_n((Twist::Vertical, false), (-2 * c) as usize));
        seq.extend(std::iter::repeat_n((Twist::Horizontal, true), (2 * b) as usize));
    }
    seq
}

/// Kauffman bracket `<D>` of the Conway diagram by tangle transfer, as a
/// Laurent polynomial in `A`.
pub fn kauffman_bracket(k: &ConwayForm) -> LaurentPolynomial {
    twist_sequence(k)
        .into_iter()
        .fold(BracketState::infinity(), |t, (kind, positive)| t.twist(kind, positive))
        .numerator()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_crossing_closures_are_unknots() {
        // N(+1) and N(-1) are one-crossing unknot diagrams: -A^{+-3}
        let pos = BracketState::infinity().twist(Twist::Horizontal, true).numerator();
        let neg = BracketState::infinity().twist(Twist::Horizontal, false).numerator();
        let mut both = [pos, neg];
        both.sort_by_key(|p| p.max_degree());
        assert_eq!(both[0], LaurentPolynomial::monomial(-1, -3));
        assert_eq!(both[1], LaurentPolynomial::monomial(-1, 3));
    }

    #[test]
    fn infinity_closes_to_one_loop() {
        assert_eq!(BracketState::infinity().numerator(), LaurentPolynomial::one());
    }

    #[test]
    fn twist_counts() {
        let k = ConwayForm::new(vec![1, 2], vec![-3, -1]).unwrap();
        let seq = twist_sequence(&k);
        assert_eq!(seq.len() as i64, k.crossing_count());
        assert_eq!(seq[..6], [(Twist::Vertical, false); 6]);
        assert_eq!(seq[6..8], [(Twist::Horizontal, true); 2]);
    }
}
