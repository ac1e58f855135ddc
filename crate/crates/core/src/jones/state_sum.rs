use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::bracket::{loop_value, twist_sequence, Twist};
use crate::conway::ConwayForm;
use crate::error::{Error, Result};
use crate::exactalg::LaurentPolynomial;

pub const STATE_SUM_MAX_CROSSINGS: i64 = 22;

/// One crossing with its four incident arcs. The A-smoothing joins
/// `(nw, ne)` and `(sw, se)` when `a_is_horizontal`, otherwise
/// `(nw, sw)` and `(ne, se)`. Fraction `-1` crossings have horizontal
/// A-smoothings.
#[derive(Clone, Copy, Debug)]
struct Crossing {
    nw: usize,
    ne: usize,
    sw: usize,
    se: usize,
    a_is_horizontal: bool,
}

struct Diagram {
    arcs: usize,
    crossings: Vec<Crossing>,
    closure: [(usize, usize); 2],
}

fn build_diagram(k: &ConwayForm) -> Diagram {
    // [inf]: arc 0 runs NW -> SW, arc 1 runs NE -> SE
    let (nw, mut ne, mut sw, mut se) = (0, 1, 0, 1);
    let mut arcs = 2;
    let mut crossings = Vec::new();
    for (kind, positive) in twist_sequence(k) {
        let (a, b) = (arcs, arcs + 1);
        arcs += 2;
        match kind {
            Twist::Horizontal => {
                crossings.push(Crossing {
                    nw: ne,
                    ne: a,
                    sw: se,
                    se: b,
                    a_is_horizontal: !positive,
                });
                ne = a;
                se = b;
            }
            Twist::Vertical => {
                crossings.push(Crossing {
                    nw: sw,
                    ne: se,
                    sw: a,
                    se: b,
                    a_is_horizontal: !positive,
                });
                sw = a;
                se = b;
            }
        }
    }
    Diagram {
        arcs,
        crossings,
        closure: [(nw, ne), (sw, se)],
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) -> bool {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra == rb {
        return false;
    }
    parent[ra] = rb;
    true
}

/// Kauffman bracket by summing over all `2^n` smoothings of the Conway
/// diagram. Exponential; used as an oracle for the transfer route.
pub fn kauffman_bracket_state_sum(k: &ConwayForm) -> Result<LaurentPolynomial> {
    let n = k.crossing_count();
    if n > STATE_SUM_MAX_CROSSINGS {
        return Err(Error::Precondition(format!(
            "state sum limited to {STATE_SUM_MAX_CROSSINGS} crossings, {k} has {n}"
        )));
    }
    let d = build_diagram(k);
    // loops -> (A-exponent -> count)
    let mut tally: BTreeMap<(usize, i64), u64> = BTreeMap::new();
    let mut parent = vec![0; d.arcs];
    for state in 0u64..(1u64 << n) {
        parent.iter_mut().enumerate().for_each(|(i, p)| *p = i);
        let mut components = d.arcs;
        let mut exponent = 0i64;
        for (idx, x) in d.crossings.iter().enumerate() {
            let a_smoothing = state >> idx & 1 == 0;
            exponent += if a_smoothing { 1 } else { -1 };
            let horizontal = a_smoothing == x.a_is_horizontal;
            let pairs = if horizontal {
                [(x.nw, x.ne), (x.sw, x.se)]
            } else {
                [(x.nw, x.sw), (x.ne, x.se)]
            };
            for (a, b) in pairs {
                components -= union(&mut parent, a, b) as usize;
            }
        }
        for (a, b) in d.closure {
            components -= union(&mut parent, a, b) as usize;
        }
        *tally.entry((components, exponent)).or_default() += 1;
    }
    let delta = loop_value();
    let mut total = LaurentPolynomial::zero();
    for ((loops, exponent), count) in tally {
        let term = LaurentPolynomial::monomial(BigInt::from(count), exponent);
        total += &(&term * &delta.pow(loops as u32 - 1));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conway::parse;
    use crate::jones::kauffman_bracket;

    #[test]
    fn agrees_with_transfer_on_small_forms() {
        for s in ["2,-2", "2,-4", "4,-2", "2,-2,2,-2", "4,-2,2,-4", "2,-6", "2,-2,4,-2"] {
            let k = parse(s).unwrap();
            assert_eq!(kauffman_bracket_state_sum(&k).unwrap(), kauffman_bracket(&k), "{s}");
        }
    }

    #[test]
    fn too_many_crossings() {
        let k = parse("2,-2,2,-2,2,-2,2,-2,2,-2,2,-2").unwrap();
        assert!(kauffman_bracket_state_sum(&k).is_err());
    }
}
