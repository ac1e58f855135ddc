//! Seifert matrix of the plumbed Seifert surface, the Conway and Alexander
//! polynomials derived from it, and Levine-Tristram signatures.
//!
//! The surface for `C[2b_g, 2c_g, ..., 2b_1, 2c_1]` is a linear plumbing of
//! `2g` twisted annuli with framings `(-c_1, b_1, -c_2, b_2, ..., -c_g, b_g)`.
//! In the basis of core curves the Seifert form has those framings on the
//! diagonal, `1` on the superdiagonal and zero elsewhere.

mod interval;
mod signature;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::conway::ConwayForm;
use crate::error::{Error, Result};
use crate::exactalg::LaurentPolynomial;

pub use signature::{
    lt_signature, lt_signature_with, ordinary_signature, total_signature, total_signature_with, CertifiedSignature,
    EigenF64Signature, PrecisionConfig, SignatureMethod,
};

#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct SeifertMatrix {
    #[serde(serialize_with = "crate::exactalg::serialize_bigint_matrix")]
    entries: Vec<Vec<BigInt>>,
}

impl SeifertMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    /// Plumbing framings `(a_1, ..., a_2g)`.
    pub fn framings(&self) -> Vec<BigInt> {
        (0..self.size()).map(|i| self.entries[i][i].clone()).collect()
    }

    /// `V + V^T`
    pub fn symmetrized(&self) -> Vec<Vec<BigInt>> {
        let n = self.size();
        (0..n)
            .map(|i| (0..n).map(|j| &self.entries[i][j] + &self.entries[j][i]).collect())
            .collect()
    }
}

impl fmt::Debug for SeifertMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.iter()).finish()
    }
}

/// Framings `(-c_1, b_1, ..., -c_g, b_g)` of the plumbed annuli.
pub fn framings(k: &ConwayForm) -> Vec<i64> {
    k.bs().iter().zip(k.cs()).flat_map(|(&b, &c)| [-c, b]).collect()
}

pub fn seifert_matrix(k: &ConwayForm) -> SeifertMatrix {
    let a = framings(k);
    let n = a.len();
    let mut entries = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        entries[i][i] = BigInt::from(a[i]);
        if i + 1 < n {
            entries[i][i + 1] = BigInt::from(1);
        }
    }
    SeifertMatrix { entries }
}

/// Exact determinant of an integer matrix (fraction-free Bareiss elimination).
pub fn integer_determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// `|det(V + V^T)|`.
pub fn symmetrized_determinant(k: &ConwayForm) -> BigInt {
    integer_determinant(&seifert_matrix(k).symmetrized()).abs()
}

/// Conway polynomial in `z` from the tridiagonal continuant
/// `D_m = a_m z D_{m-1} + D_{m-2}`.
pub fn conway_polynomial(k: &ConwayForm) -> LaurentPolynomial {
    let z = LaurentPolynomial::var();
    // D_{-1} = 0, D_0 = 1
    let mut prev = LaurentPolynomial::zero();
    let mut cur = LaurentPolynomial::one();
    for a in framings(k) {
        let next = &(&z.scale(&BigInt::from(a)) * &cur) + &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Conway polynomial by cofactor expansion of `s V - s^{-1} V^T`
/// (`s = t^{1/2}`) followed by rewriting in `z = s - s^{-1}`.
///
/// Shares nothing with [`conway_polynomial`] beyond the Seifert matrix.
pub fn conway_polynomial_by_expansion(k: &ConwayForm) -> Result<LaurentPolynomial> {
    let v = seifert_matrix(k);
    let n = v.size();
    if n > 24 {
        return Err(Error::Precondition(format!(
            "cofactor expansion limited to 24x24, got {n}x{n}"
        )));
    }
    let s = LaurentPolynomial::var();
    let s_inv = LaurentPolynomial::monomial(1, -1);
    let m: Vec<Vec<LaurentPolynomial>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| &s.scale(v.entry(i, j)) - &s_inv.scale(v.entry(j, i)))
                .collect()
        })
        .collect();
    let det = laurent_determinant(&m);
    symmetric_in_s_to_z(&det)
}

/// Determinant over the Laurent ring by memoized Laplace expansion along rows.
pub fn laurent_determinant(m: &[Vec<LaurentPolynomial>]) -> LaurentPolynomial {
    fn minor(
        m: &[Vec<LaurentPolynomial>],
        row: usize,
        cols: u32,
        memo: &mut HashMap<u32, LaurentPolynomial>,
    ) -> LaurentPolynomial {
        if row == m.len() {
            return LaurentPolynomial::one();
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let mut acc = LaurentPolynomial::zero();
        let mut position = 0;
        for col in 0..m.len() {
            if cols & (1 << col) == 0 {
                continue;
            }
            if !m[row][col].is_zero() {
                let sub = minor(m, row + 1, cols & !(1 << col), memo);
                let term = &m[row][col] * &sub;
                acc = if position % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            position += 1;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    let full = if m.len() == 32 { u32::MAX } else { (1u32 << m.len()) - 1 };
    minor(m, 0, full, &mut HashMap::new())
}

/// Rewrites a Laurent polynomial in `s` that is a polynomial in
/// `z = s - s^{-1}` by peeling off leading terms.
fn symmetric_in_s_to_z(p: &LaurentPolynomial) -> Result<LaurentPolynomial> {
    let z_in_s = LaurentPolynomial::from_terms([(1, 1), (-1, -1)]);
    let mut rest = p.clone();
    let mut out = LaurentPolynomial::zero();
    while let Some(d) = rest.max_degree() {
        if d < 0 {
            return Err(Error::Internal(format!("{p} is not a polynomial in s - 1/s")));
        }
        let c = rest.coeff(d);
        let power = z_in_s.pow(d as u32).scale(&c);
        rest = &rest - &power;
        out = &out + &LaurentPolynomial::monomial(c, d);
    }
    Ok(out)
}

/// `a_2`, the `z^2` coefficient of the Conway polynomial.
pub fn a2(k: &ConwayForm) -> BigInt {
    conway_polynomial(k).coeff(2)
}

/// `a_4`, the `z^4` coefficient of the Conway polynomial.
pub fn a4(k: &ConwayForm) -> BigInt {
    conway_polynomial(k).coeff(4)
}

/// Symmetrized Alexander polynomial `Delta(t)`, obtained from the Conway
/// polynomial by `z^2 = t - 2 + t^{-1}`.
pub fn alexander_polynomial(k: &ConwayForm) -> LaurentPolynomial {
    let z2 = LaurentPolynomial::from_terms([(1, 1), (0, -2), (-1, 1)]);
    conway_polynomial(k)
        .terms()
        .map(|(e, c)| {
            debug_assert!(e % 2 == 0, "Conway polynomial of a knot is even");
            z2.pow((e / 2) as u32).scale(c)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conway::parse;

    fn k(s: &str) -> ConwayForm {
        parse(s).unwrap()
    }

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn matrix_examples() {
        assert_eq!(seifert_matrix(&k("2,-2")).rows(), ints(&[&[1, 1], &[0, 1]]));
        assert_eq!(
            seifert_matrix(&k("2,-2,2,-2")).rows(),
            ints(&[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1], &[0, 0, 0, 1]])
        );
        assert_eq!(seifert_matrix(&k("2,-4")).rows(), ints(&[&[2, 1], &[0, 1]]));
        assert_eq!(symmetrized_determinant(&k("2,-2")), 3.into());
        assert_eq!(symmetrized_determinant(&k("2,-2,2,-2")), 5.into());
        assert_eq!(symmetrized_determinant(&k("2,-4")), 7.into());
    }

    #[test]
    fn bareiss_matches_hand_values() {
        assert_eq!(integer_determinant(&ints(&[&[0, 1], &[1, 0]])), (-1).into());
        assert_eq!(
            integer_determinant(&ints(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]])),
            BigInt::from(6)
        );
        assert_eq!(integer_determinant(&ints(&[&[1, 2], &[2, 4]])), 0.into());
    }

    #[test]
    fn conway_examples() {
        let z = |t: &[(i64, i64)]| LaurentPolynomial::from_terms(t.iter().copied());
        assert_eq!(conway_polynomial(&k("2,-2")), z(&[(0, 1), (2, 1)]));
        assert_eq!(conway_polynomial(&k("2,-2,2,-2")), z(&[(0, 1), (2, 3), (4, 1)]));
        assert_eq!(a2(&k("2,-2")), 1.into());
        assert_eq!(a4(&k("2,-2")), 0.into());
        assert_eq!(a2(&k("2,-2,2,-2")), 3.into());
        assert_eq!(a4(&k("2,-2,2,-2")), 1.into());
        assert_eq!(a4(&k("4,-2,2,-4")), 4.into());
        for s in ["2,-2", "4,-2,2,-4", "6,-4,2,-2,4,-2"] {
            assert_eq!(conway_polynomial(&k(s)).coeff(0), 1.into());
            assert_eq!(conway_polynomial_by_expansion(&k(s)).unwrap(), conway_polynomial(&k(s)));
        }
    }

    #[test]
    fn alexander_of_trefoil() {
        let d = alexander_polynomial(&k("2,-2"));
        assert_eq!(d, LaurentPolynomial::from_terms([(1, 1), (0, -1), (-1, 1)]));
        assert_eq!(d.eval_at_minus_one(), (-3).into());
        assert_eq!(d.eval_at_one(), 1.into());
    }
}
