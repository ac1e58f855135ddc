//! Numerical verification of the induction on twist parameters: the
//! determinant grows at least linearly in `a_2` under each neighbor move,
//! so the main obstruction propagates from a form to its neighbors.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::conway::{ConwayForm, Move};
use crate::error::{Error, Result};
use crate::exactalg::{serialize_bigint, serialize_rational, Rational};
use crate::gauss_forms::a2_gauss;
use crate::obstruction::main_obstruction;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoveDelta {
    pub i: usize,
    pub kind: Move,
    #[serde(serialize_with = "serialize_bigint")]
    pub delta_det: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub delta_a2: BigInt,
    pub bound: i64,
}

impl MoveDelta {
    /// `delta_det >= bound * delta_a2`.
    pub fn satisfies_bound(&self) -> bool {
        self.delta_det >= BigInt::from(self.bound) * &self.delta_a2
    }

    /// `delta_det / delta_a2`.
    pub fn ratio(&self) -> Rational {
        Rational::new(self.delta_det.clone(), self.delta_a2.clone())
    }
}

/// `8(g-i)+4` for `b_i+`, `8i-4` for `c_i-`.
pub fn move_bound(g: usize, i: usize, kind: Move) -> i64 {
    let (g, i) = (g as i64, i as i64);
    match kind {
        Move::BPlus => 8 * (g - i) + 4,
        Move::CMinus => 8 * i - 4,
    }
}

/// `-c_1 - ... - c_i` for `b_i+`, `b_i + ... + b_g` for `c_i-`.
pub fn predicted_delta_a2(k: &ConwayForm, i: usize, kind: Move) -> i64 {
    match kind {
        Move::BPlus => -k.cs()[..i].iter().sum::<i64>(),
        Move::CMinus => k.bs()[i - 1..].iter().sum(),
    }
}

pub fn move_delta(k: &ConwayForm, i: usize, kind: Move) -> Result<MoveDelta> {
    let n = k.neighbor(i, kind)?;
    let delta_a2 = a2_gauss(&n) - a2_gauss(k);
    if delta_a2 != BigInt::from(predicted_delta_a2(k, i, kind)) {
        return Err(Error::Internal(format!(
            "{k} {kind} at {i}: a2 changed by {delta_a2}, expected {}",
            predicted_delta_a2(k, i, kind)
        )));
    }
    Ok(MoveDelta {
        i,
        kind,
        delta_det: n.determinant() - k.determinant(),
        delta_a2,
        bound: move_bound(k.genus(), i, kind),
    })
}

/// `x_j = d(K'_j) - d(K_j)` and `y_j = p(K'_j) - p(K_j)` for `j = 1..=g`.
pub fn xy_sequence(k: &ConwayForm, i: usize, kind: Move) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
    let n = k.neighbor(i, kind)?;
    let (fk, fn_) = (k.fractions(), n.fractions());
    let x = fk.iter().zip(&fn_).map(|(a, b)| &b.d - &a.d).collect();
    let y = fk.iter().zip(&fn_).map(|(a, b)| &b.p - &a.p).collect();
    Ok((x, y))
}

/// Checks the intermediate claims behind the determinant estimate: the
/// differences vanish below `i`, follow the fraction recurrence above `i`
/// and obey the two lower bounds for every `j >= i`.
pub fn claim_xy_check(k: &ConwayForm, i: usize, kind: Move) -> Result<bool> {
    let (x, y) = xy_sequence(k, i, kind)?;
    let big = |v: i64| BigInt::from(v);
    for j in 1..i {
        if !x[j - 1].is_zero() || !y[j - 1].is_zero() {
            return Ok(false);
        }
    }
    for j in i..=k.genus() {
        let (xj, yj) = (&x[j - 1], &y[j - 1]);
        if j > i {
            let (b, c) = (big(k.b(j)), big(k.c(j)));
            let (xp, yp) = (&x[j - 2], &y[j - 2]);
            let rx = (-4 * &b * &c - 1) * xp - 2 * &b * yp;
            let ry = -2 * &c * xp - yp;
            if &rx != xj || &ry != yj {
                return Ok(false);
            }
        }
        let diff = xj - yj;
        let ok = match kind {
            Move::BPlus => {
                let s = big(predicted_delta_a2(k, i, kind));
                diff >= 4 * &s && *xj >= big(8 * (j as i64 - i as i64) + 4) * &s
            }
            Move::CMinus => {
                let bsum: i64 = k.bs()[i - 1..j].iter().sum();
                diff >= big(4 * i as i64 - 2) && *xj >= big(8 * i as i64 - 4) * big(bsum)
            }
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `176/(10g)` for `g >= 6`, `16/g` otherwise.
pub fn induction_threshold(g: usize) -> Rational {
    let g = BigInt::from(g as i64);
    if g >= BigInt::from(6) {
        Rational::new(176.into(), BigInt::from(10) * g)
    } else {
        Rational::new(16.into(), g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepOutcome {
    #[serde(flatten)]
    pub delta: MoveDelta,
    #[serde(serialize_with = "serialize_rational")]
    pub threshold: Rational,
    /// The sufficient condition `delta_det / delta_a2 >= threshold`.
    pub condition: bool,
    /// Whether the neighbor satisfies the main obstruction.
    pub conclusion: bool,
}

impl StepOutcome {
    /// The conclusion holds although the sufficient condition does not.
    pub fn slack(&self) -> bool {
        self.conclusion && !self.condition
    }
}

/// Evaluates the induction criterion for one move from a form satisfying
/// the main obstruction.
pub fn step_outcome(k: &ConwayForm, i: usize, kind: Move) -> Result<StepOutcome> {
    if !main_obstruction(k) {
        return Err(Error::Precondition(format!(
            "{k} does not satisfy the main obstruction"
        )));
    }
    let delta = move_delta(k, i, kind)?;
    let threshold = induction_threshold(k.genus());
    let condition = delta.ratio() >= threshold;
    let conclusion = main_obstruction(&k.neighbor(i, kind)?);
    if condition && !conclusion {
        return Err(Error::Internal(format!(
            "{k} {kind} at {i}: induction condition holds but the neighbor fails the main obstruction"
        )));
    }
    Ok(StepOutcome {
        delta,
        threshold,
        condition,
        conclusion,
    })
}

/// True iff the sufficient condition holds for this move.
pub fn induction_step(k: &ConwayForm, i: usize, kind: Move) -> Result<bool> {
    Ok(step_outcome(k, i, kind)?.condition)
}

/// Moves excepted from propagation: `b_g+` and `c_1-` when `g <= 3`.
pub fn is_exceptional_move(g: usize, i: usize, kind: Move) -> bool {
    g <= 3 && ((kind == Move::BPlus && i == g) || (kind == Move::CMinus && i == 1))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InductionSummary {
    pub forms: usize,
    pub moves: usize,
    pub diff_estimate_failures: usize,
    pub claim_failures: usize,
    /// Moves from a form satisfying the main obstruction.
    pub propagation_checked: usize,
    pub condition_held: usize,
    pub slack: usize,
    /// Neighbors failing the main obstruction although the source satisfies it.
    pub propagation_failures: usize,
    /// Propagation failures at a move that is not exceptional.
    pub unexpected_failures: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub counterexamples: Vec<String>,
}

impl InductionSummary {
    pub fn ok(&self) -> bool {
        self.diff_estimate_failures == 0 && self.claim_failures == 0 && self.unexpected_failures == 0
    }

    fn merge(mut self, o: Self) -> Self {
        self.forms += o.forms;
        self.moves += o.moves;
        self.diff_estimate_failures += o.diff_estimate_failures;
        self.claim_failures += o.claim_failures;
        self.propagation_checked += o.propagation_checked;
        self.condition_held += o.condition_held;
        self.slack += o.slack;
        self.propagation_failures += o.propagation_failures;
        self.unexpected_failures += o.unexpected_failures;
        self.counterexamples.extend(o.counterexamples);
        self
    }
}

/// Runs every check on every move of one form.
pub fn verify_form(k: &ConwayForm) -> Result<InductionSummary> {
    let mut s = InductionSummary {
        forms: 1,
        ..Default::default()
    };
    let g = k.genus();
    let source_main = main_obstruction(k);
    for i in 1..=g {
        for kind in Move::ALL {
            s.moves += 1;
            let d = move_delta(k, i, kind)?;
            if !d.satisfies_bound() {
                s.diff_estimate_failures += 1;
                s.counterexamples.push(format!("diff-estimate: {k} {kind} i={i}"));
            }
            if !claim_xy_check(k, i, kind)? {
                s.claim_failures += 1;
                s.counterexamples.push(format!("x/y claim: {k} {kind} i={i}"));
            }
            if source_main {
                let out = step_outcome(k, i, kind)?;
                s.propagation_checked += 1;
                s.condition_held += out.condition as usize;
                s.slack += out.slack() as usize;
                if !out.conclusion {
                    s.propagation_failures += 1;
                    if !is_exceptional_move(g, i, kind) {
                        s.unexpected_failures += 1;
                        s.counterexamples.push(format!("propagation: {k} {kind} i={i}"));
                    }
                }
            }
        }
    }
    Ok(s)
}

pub fn verify_corpus<'a>(forms: impl IntoIterator<Item = &'a ConwayForm>) -> Result<InductionSummary> {
    forms
        .into_iter()
        .map(verify_form)
        .try_fold(InductionSummary::default(), |acc, s| Ok(acc.merge(s?)))
}

/// Parallel [`verify_corpus`]; the summary is identical up to the order
/// of counterexamples, which are sorted.
pub fn verify_corpus_par(forms: &[ConwayForm]) -> Result<InductionSummary> {
    use rayon::prelude::*;
    let mut s = forms
        .par_iter()
        .map(verify_form)
        .try_reduce(InductionSummary::default, |a, b| Ok(a.merge(b)))?;
    s.counterexamples.sort();
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conway::parse;

    fn k(s: &str) -> ConwayForm {
        parse(s).unwrap()
    }

    #[test]
    fn trefoil_moves_are_tight() {
        for kind in Move::ALL {
            let d = move_delta(&k("2,-2"), 1, kind).unwrap();
            assert_eq!(d.delta_a2, 1.into());
            assert_eq!(d.delta_det, 4.into());
            assert_eq!(d.bound, 4);
            assert!(d.satisfies_bound());
        }
    }

    #[test]
    fn xy_examples() {
        let t = k("2,-2,2,-2");
        let (x, y) = xy_sequence(&t, 1, Move::BPlus).unwrap();
        assert_eq!((x[0].clone(), y[0].clone()), (4.into(), 0.into()));
        assert!(claim_xy_check(&t, 1, Move::BPlus).unwrap());
        let (x, _) = xy_sequence(&t, 1, Move::CMinus).unwrap();
        assert_eq!(x[0], 4.into());
        assert!(claim_xy_check(&t, 1, Move::CMinus).unwrap());
        let (x, y) = xy_sequence(&t, 2, Move::BPlus).unwrap();
        assert!(x[0].is_zero() && y[0].is_zero());
        assert!(claim_xy_check(&t, 2, Move::CMinus).unwrap());
    }

    #[test]
    fn thresholds() {
        assert_eq!(induction_threshold(4), Rational::from_integer(4.into()));
        assert_eq!(induction_threshold(2), Rational::from_integer(8.into()));
        assert_eq!(induction_threshold(6), Rational::new(176.into(), 60.into()));
        assert_eq!(move_bound(3, 2, Move::BPlus), 12);
        assert_eq!(move_bound(2, 1, Move::CMinus), 4);
    }

    #[test]
    fn genus_four_steps_hold() {
        let base = k("4,-2,2,-2,2,-2,2,-4");
        assert!(main_obstruction(&base));
        for i in 1..=4 {
            for kind in Move::ALL {
                assert!(induction_step(&base, i, kind).unwrap(), "{kind} {i}");
            }
        }
    }

    #[test]
    fn step_requires_main_obstruction() {
        assert!(matches!(
            step_outcome(&k("2,-2,2,-2"), 1, Move::BPlus),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn exceptional_moves() {
        assert!(is_exceptional_move(2, 2, Move::BPlus));
        assert!(is_exceptional_move(3, 1, Move::CMinus));
        assert!(!is_exceptional_move(3, 1, Move::BPlus));
        assert!(!is_exceptional_move(4, 4, Move::BPlus));
    }
}
