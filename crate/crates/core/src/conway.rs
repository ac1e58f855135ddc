//! Conway normal forms `C[2b_g, 2c_g, ..., 2b_1, 2c_1]` of positive
//! 2-bridge knots.
//!
//! Pairs are stored innermost-first: index 1 is the pair `(b_1, c_1)` at
//! the right end of the bracket, index `g` the pair at the left end. The
//! textual form is outermost-first, exactly as the bracket is written.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ConwayForm {
    b: Vec<i64>,
    c: Vec<i64>,
}

/// A single-crossing-pair move used by the induction argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Move {
    /// `b_i -> b_i + 1`
    BPlus,
    /// `c_i -> c_i - 1`
    CMinus,
}

impl Move {
    pub const ALL: [Move; 2] = [Move::BPlus, Move::CMinus];
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Move::BPlus => "b_plus",
            Move::CMinus => "c_minus",
        })
    }
}

/// `d_j / p_j` from the continued fraction of the j-th truncate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fraction {
    pub d: BigInt,
    pub p: BigInt,
}

impl Fraction {
    pub fn is_reduced_proper(&self) -> bool {
        self.d > self.p && self.p > BigInt::zero() && self.d.gcd(&self.p).is_one()
    }
}

impl ConwayForm {
    /// Builds a form from innermost-first parameter lists.
    pub fn new(b: Vec<i64>, c: Vec<i64>) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::Validation("genus must be at least 1".into()));
        }
        if b.len() != c.len() {
            return Err(Error::Validation(format!(
                "{} b-parameters but {} c-parameters",
                b.len(),
                c.len()
            )));
        }
        if let Some(i) = b.iter().position(|&x| x < 1) {
            return Err(Error::Validation(format!("b_{} = {} must be positive", i + 1, b[i])));
        }
        if let Some(i) = c.iter().position(|&x| x > -1) {
            return Err(Error::Validation(format!("c_{} = {} must be negative", i + 1, c[i])));
        }
        Ok(Self { b, c })
    }

    /// `C[2,-2,...,2,-2]`, the diagram of the (2, 2g+1)-torus knot.
    pub fn torus(g: usize) -> Self {
        Self {
            b: vec![1; g.max(1)],
            c: vec![-1; g.max(1)],
        }
    }

    /// Builds a form from the bracket entries, outermost first.
    pub fn from_entries(entries: &[i64]) -> Result<Self> {
        if entries.is_empty() || entries.len() % 2 != 0 {
            return Err(Error::Validation(format!(
                "expected an even, non-zero number of entries, got {}",
                entries.len()
            )));
        }
        for (pos, &e) in entries.iter().enumerate() {
            if e == 0 {
                return Err(Error::Validation(format!("entry {} is zero", pos + 1)));
            }
            if e % 2 != 0 {
                return Err(Error::Validation(format!("entry {} = {e} is odd", pos + 1)));
            }
            let want_positive = pos % 2 == 0;
            if (e > 0) != want_positive {
                return Err(Error::Validation(format!(
                    "entry {} = {e} breaks the +,-,+,- sign pattern",
                    pos + 1
                )));
            }
        }
        let g = entries.len() / 2;
        let mut b = vec![0; g];
        let mut c = vec![0; g];
        for (k, pair) in entries.chunks(2).enumerate() {
            let i = g - 1 - k;
            b[i] = pair[0] / 2;
            c[i] = pair[1] / 2;
        }
        Self::new(b, c)
    }

    pub fn genus(&self) -> usize {
        self.b.len()
    }

    /// `b_i`, 1-based.
    pub fn b(&self, i: usize) -> i64 {
        self.b[i - 1]
    }

    /// `c_i`, 1-based.
    pub fn c(&self, i: usize) -> i64 {
        self.c[i - 1]
    }

    pub fn bs(&self) -> &[i64] {
        &self.b
    }

    pub fn cs(&self) -> &[i64] {
        &self.c
    }

    /// Bracket entries `[2b_g, 2c_g, ..., 2b_1, 2c_1]`.
    pub fn entries(&self) -> Vec<i64> {
        self.b
            .iter()
            .zip(&self.c)
            .rev()
            .flat_map(|(b, c)| [2 * b, 2 * c])
            .collect()
    }

    pub fn crossing_count(&self) -> i64 {
        2 * self.complexity()
    }

    /// `s(K) = sum (b_i - c_i)`, half the number of diagram crossings.
    pub fn complexity(&self) -> i64 {
        self.b.iter().sum::<i64>() - self.c.iter().sum::<i64>()
    }

    /// `sum b_i + sum (-c_i) - 2g`; zero exactly on the torus diagrams.
    pub fn delta(&self) -> i64 {
        self.complexity() - 2 * self.genus() as i64
    }

    pub fn is_torus_2k(&self) -> bool {
        self.b.iter().all(|&x| x == 1) && self.c.iter().all(|&x| x == -1)
    }

    /// `C[2b_g,2c_g,...,2b_1,2c_1] -> C[-2c_1,-2b_1,...,-2c_g,-2b_g]`;
    /// the result is a diagram of the same knot.
    pub fn mirror_symmetry(&self) -> Self {
        let b = self.c.iter().rev().map(|c| -c).collect();
        let c = self.b.iter().rev().map(|b| -b).collect();
        Self { b, c }
    }

    /// The lexicographically smaller of this form and its symmetry image
    /// (compared on bracket entries).
    pub fn canonical(&self) -> Self {
        let m = self.mirror_symmetry();
        match self.entries().cmp(&m.entries()) {
            Ordering::Greater => m,
            _ => self.clone(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.entries() <= self.mirror_symmetry().entries()
    }

    fn check_index(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.genus() {
            return Err(Error::IndexOutOfRange {
                index: j,
                max: self.genus(),
            });
        }
        Ok(())
    }

    /// `K_j = C[2b_j, 2c_j, ..., 2b_1, 2c_1]`.
    pub fn truncate(&self, j: usize) -> Result<Self> {
        self.check_index(j)?;
        Ok(Self {
            b: self.b[..j].to_vec(),
            c: self.c[..j].to_vec(),
        })
    }

    /// `K^{b_i+}` or `K^{c_i-}`.
    pub fn neighbor(&self, i: usize, kind: Move) -> Result<Self> {
        self.check_index(i)?;
        let mut out = self.clone();
        match kind {
            Move::BPlus => out.b[i - 1] += 1,
            Move::CMinus => out.c[i - 1] -= 1,
        }
        Ok(out)
    }

    /// All `(d_j, p_j)` for `j = 1..=g`.
    pub fn fractions(&self) -> Vec<Fraction> {
        let mut d = BigInt::one();
        let mut p = BigInt::zero();
        let mut out = Vec::with_capacity(self.genus());
        for (&b, &c) in self.b.iter().zip(&self.c) {
            let (b, c) = (BigInt::from(b), BigInt::from(c));
            let next_d = (-4 * &b * &c - 1) * &d - 2 * &b * &p;
            let next_p = -2 * &c * &d - &p;
            d = next_d;
            p = next_p;
            out.push(Fraction {
                d: d.clone(),
                p: p.clone(),
            });
        }
        out
    }

    pub fn fraction(&self, j: usize) -> Result<Fraction> {
        self.check_index(j)?;
        Ok(self.fractions().swap_remove(j - 1))
    }

    /// `det(K) = d_g`.
    pub fn determinant(&self) -> BigInt {
        self.fractions().pop().expect("genus >= 1").d
    }

    /// Compact report key `g=<g>;b=<b_1,..>;c=<c_1,..>`.
    pub fn key(&self) -> String {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        format!("g={};b={};c={}", self.genus(), join(&self.b), join(&self.c))
    }

    /// Entries as the comma separated list accepted by [`parse`].
    pub fn to_list(&self) -> String {
        self.entries().iter().map(i64::to_string).collect::<Vec<_>>().join(",")
    }
}

/// Parses `"2,-2"` or `"C[2,-2]"`, outermost entry first.
pub fn parse(text: &str) -> Result<ConwayForm> {
    let mut s = text.trim();
    if let Some(rest) = s.strip_prefix('C').or_else(|| s.strip_prefix('c')) {
        s = rest.trim_start();
    }
    if let Some(inner) = s.strip_prefix('[') {
        s = inner
            .strip_suffix(']')
            .ok_or_else(|| Error::Parse(format!("unbalanced bracket in `{text}`")))?;
    }
    if s.trim().is_empty() {
        return Err(Error::Parse("empty Conway form".into()));
    }
    let entries = s
        .split(',')
        .map(|tok| {
            let tok = tok.trim().replace('\u{2212}', "-");
            tok.parse::<i64>()
                .map_err(|_| Error::Parse(format!("`{tok}` is not an integer")))
        })
        .collect::<Result<Vec<_>>>()?;
    ConwayForm::from_entries(&entries)
}

impl FromStr for ConwayForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

impl fmt::Display for ConwayForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C[{}]", self.to_list())
    }
}

impl fmt::Debug for ConwayForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl PartialOrd for ConwayForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by complexity, then genus, then bracket entries lexicographically.
impl Ord for ConwayForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.complexity()
            .cmp(&other.complexity())
            .then(self.genus().cmp(&other.genus()))
            .then_with(|| self.entries().cmp(&other.entries()))
    }
}

/// Exact lower bound `sum(-2 b_i c_i) + 1` for the determinant.
pub fn determinant_lower_bound(k: &ConwayForm) -> BigInt {
    k.bs()
        .iter()
        .zip(k.cs())
        .map(|(&b, &c)| BigInt::from(-2 * b) * BigInt::from(c))
        .sum::<BigInt>()
        + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(s: &str) -> ConwayForm {
        parse(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        let t = k("2,-2");
        assert_eq!((t.genus(), t.bs(), t.cs()), (1, &[1][..], &[-1][..]));
        let f = k("4,-2,2,-4");
        assert_eq!(f.bs(), &[1, 2]);
        assert_eq!(f.cs(), &[-2, -1]);
        assert_eq!(k("C[4, -2, 2, -4]"), f);
        assert_eq!(k("4,\u{2212}2,2,\u{2212}4"), f);
    }

    #[test]
    fn parse_rejections() {
        assert!(matches!(parse("2,0,2,-2"), Err(Error::Validation(_))));
        assert!(matches!(parse("3,-2"), Err(Error::Validation(_))));
        assert!(matches!(parse("-2,2"), Err(Error::Validation(_))));
        assert!(matches!(parse("2,-2,2"), Err(Error::Validation(_))));
        assert!(matches!(parse("2,x"), Err(Error::Parse(_))));
        assert!(matches!(parse(""), Err(Error::Parse(_))));
        assert!(matches!(parse("C[2,-2"), Err(Error::Parse(_))));
    }

    #[test]
    fn symmetry_examples() {
        let g1 = ConwayForm::new(vec![2], vec![-1]).unwrap();
        assert_eq!(g1.mirror_symmetry(), ConwayForm::new(vec![1], vec![-2]).unwrap());
        assert_eq!(k("2,-2").mirror_symmetry(), k("2,-2"));
        assert_eq!(k("4,-2,2,-2").mirror_symmetry(), k("2,-2,2,-4"));
        assert_eq!(k("4,-2,2,-2").canonical(), k("2,-2,2,-4"));
    }

    #[test]
    fn fraction_examples() {
        let f = k("2,-2").fraction(1).unwrap();
        assert_eq!((f.d, f.p), (3.into(), 2.into()));
        let f = k("2,-2,2,-2").fraction(2).unwrap();
        assert_eq!((f.d, f.p), (5.into(), 4.into()));
        assert!(matches!(
            k("2,-2").fraction(2),
            Err(Error::IndexOutOfRange { index: 2, max: 1 })
        ));
        for b in 1..=50i64 {
            for m in 1..=50i64 {
                let g1 = ConwayForm::new(vec![b], vec![-m]).unwrap();
                assert_eq!(g1.determinant(), BigInt::from(4 * b * m - 1));
            }
        }
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(k("2,-2").determinant(), 3.into());
        assert_eq!(k("2,-2,2,-2").determinant(), 5.into());
        assert_eq!(k("4,-2,2,-4").determinant(), 33.into());
    }

    #[test]
    fn truncate_and_neighbor() {
        assert_eq!(k("4,-2,2,-2").truncate(1).unwrap(), k("2,-2"));
        assert_eq!(k("4,-2,2,-2").truncate(2).unwrap(), k("4,-2,2,-2"));
        assert_eq!(k("2,-4,6,-2").truncate(1).unwrap(), k("6,-2"));
        assert!(k("2,-2").truncate(0).is_err());
        assert_eq!(k("2,-2").neighbor(1, Move::BPlus).unwrap(), k("4,-2"));
        assert_eq!(k("2,-2").neighbor(1, Move::CMinus).unwrap(), k("2,-4"));
        assert_eq!(k("2,-2,2,-2").neighbor(1, Move::CMinus).unwrap(), k("2,-2,2,-4"));
        assert!(k("2,-2").neighbor(2, Move::BPlus).is_err());
    }

    #[test]
    fn torus_and_delta() {
        assert!(k("2,-2,2,-2").is_torus_2k());
        assert!(!k("4,-2").is_torus_2k());
        assert!(!k("2,-2,2,-4").is_torus_2k());
        assert_eq!(k("2,-2,2,-2").delta(), 0);
        assert_eq!(k("4,-2").delta(), 1);
        assert_eq!(k("4,-4").delta(), 2);
    }

    #[test]
    fn keys_and_display() {
        let f = k("4,-2,2,-4");
        assert_eq!(f.key(), "g=2;b=1,2;c=-2,-1");
        assert_eq!(f.to_string(), "C[4,-2,2,-4]");
        assert_eq!(f.crossing_count(), 12);
        assert_eq!(f.complexity(), 6);
    }
}
