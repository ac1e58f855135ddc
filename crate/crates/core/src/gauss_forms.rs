//! Gauss-diagram formulas for `a_2` and `4v_3` on Conway forms, and the
//! closed forms of the named families.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::conway::ConwayForm;
use crate::error::{Error, Result};
use crate::exactalg::serialize_rational;
use crate::exactalg::Rational;
use crate::{jones, seifert};

/// `a_2 = sum_{i} sum_{j <= i} -b_i c_j`.
pub fn a2_gauss(k: &ConwayForm) -> BigInt {
    let mut partial_c = 0i64;
    let mut total = BigInt::from(0);
    for (&b, &c) in k.bs().iter().zip(k.cs()) {
        partial_c += c;
        total -= BigInt::from(b) * partial_c;
    }
    total
}

/// `4 v_3 = 1/2 ( sum_j -c_j (sum_{i >= j} b_i)^2 + sum_i b_i (sum_{j <= i} c_j)^2 )`.
pub fn four_v3_gauss(k: &ConwayForm) -> BigInt {
    let g = k.genus();
    let mut twice = BigInt::from(0);
    let mut tail_b: i64 = k.bs().iter().sum();
    let mut head_c = 0i64;
    for i in 0..g {
        let (b, c) = (k.bs()[i], k.cs()[i]);
        head_c += c;
        let tb = BigInt::from(tail_b);
        let hc = BigInt::from(head_c);
        twice += -c * &tb * &tb + b * &hc * &hc;
        tail_b -= b;
    }
    let (q, r) = twice.div_rem(&BigInt::from(2));
    debug_assert!(r == BigInt::from(0), "4v3 is an integer");
    q
}

pub fn v3_gauss(k: &ConwayForm) -> Rational {
    Rational::new(four_v3_gauss(k), BigInt::from(4))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyId {
    /// `C[2b_g, -2, 2, -2, ..., 2, -2]`, params `(b_g, g)`.
    BgChain,
    /// `C[2b_g, -2, 2, ..., 2, 2c_1]` with `c_1 = -m`, params `(g, b_g, m)`.
    Genus4TwoParam,
    /// `C[2x, -2y, 2z, -2w]`.
    Genus2General,
    /// `C[2x, -2, 2, -2w]`.
    Genus2A,
    /// `C[2x, -4, 2, -2]`.
    Genus2B,
    /// `C[2x, -2, 4, -2, 2, -2v]`.
    Genus3Y,
    /// `C[2x, -4, 2, -2, 2, -2v]`.
    Genus3X,
    /// `C[2x, -2, 2, -2, 2, -2v]`.
    Genus3Final,
}

impl FamilyId {
    pub const ALL: [FamilyId; 8] = [
        FamilyId::BgChain,
        FamilyId::Genus4TwoParam,
        FamilyId::Genus2General,
        FamilyId::Genus2A,
        FamilyId::Genus2B,
        FamilyId::Genus3Y,
        FamilyId::Genus3X,
        FamilyId::Genus3Final,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::BgChain => "bg_chain",
            FamilyId::Genus4TwoParam => "genus4_two_param",
            FamilyId::Genus2General => "genus2_general",
            FamilyId::Genus2A => "genus2_a",
            FamilyId::Genus2B => "genus2_b",
            FamilyId::Genus3Y => "genus3_y",
            FamilyId::Genus3X => "genus3_x",
            FamilyId::Genus3Final => "genus3_final",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            FamilyId::Genus2B => 1,
            FamilyId::BgChain | FamilyId::Genus2A => 2,
            FamilyId::Genus3Y | FamilyId::Genus3X | FamilyId::Genus3Final => 2,
            FamilyId::Genus4TwoParam => 3,
            FamilyId::Genus2General => 4,
        }
    }

    /// Fields whose printed closed form is known to disagree with the
    /// engine.
    pub fn known_typos(self) -> &'static [Field] {
        match self {
            FamilyId::BgChain | FamilyId::Genus2A => &[Field::FourV3],
            FamilyId::Genus4TwoParam => &[Field::Det],
            _ => &[],
        }
    }

    fn check_arity(self, params: &[i64]) -> Result<()> {
        if params.len() != self.arity() {
            return Err(Error::Arity {
                family: self.name(),
                expected: self.arity(),
                got: params.len(),
            });
        }
        if let Some(p) = params.iter().find(|&&p| p < 1) {
            return Err(Error::Validation(format!(
                "{} parameters must be positive, got {p}",
                self.name()
            )));
        }
        if self == FamilyId::Genus4TwoParam && params[0] < 2 {
            return Err(Error::Validation("genus4_two_param needs g >= 2".into()));
        }
        Ok(())
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "family",
                name: s.to_string(),
                available: FamilyId::ALL.iter().map(|f| f.name()).collect::<Vec<_>>().join(", "),
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    A2,
    A4,
    FourV3,
    Det,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::A2 => "a2",
            Field::A4 => "a4",
            Field::FourV3 => "four_v3",
            Field::Det => "det",
        })
    }
}

fn ser_opt<S: serde::Serializer>(q: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => serialize_rational(q, s),
        None => s.serialize_none(),
    }
}

/// Closed-form values; `a4` and `four_v3` are only stated for some families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedForm {
    #[serde(serialize_with = "serialize_rational")]
    pub a2: Rational,
    #[serde(serialize_with = "ser_opt")]
    pub a4: Option<Rational>,
    #[serde(serialize_with = "ser_opt")]
    pub four_v3: Option<Rational>,
    #[serde(serialize_with = "serialize_rational")]
    pub det: Rational,
}

impl ClosedForm {
    pub fn get(&self, field: Field) -> Option<&Rational> {
        match field {
            Field::A2 => Some(&self.a2),
            Field::A4 => self.a4.as_ref(),
            Field::FourV3 => self.four_v3.as_ref(),
            Field::Det => Some(&self.det),
        }
    }
}

/// The Conway form a family instance stands for.
pub fn family_form(f: FamilyId, params: &[i64]) -> Result<ConwayForm> {
    f.check_arity(params)?;
    let text: Vec<i64> = match f {
        FamilyId::BgChain => {
            let (bg, g) = (params[0], params[1] as usize);
            let mut v = vec![2 * bg, -2];
            for _ in 1..g {
                v.extend([2, -2]);
            }
            v
        }
        FamilyId::Genus4TwoParam => {
            let (g, bg, m) = (params[0] as usize, params[1], params[2]);
            let mut v = vec![2 * bg, -2];
            for _ in 1..g - 1 {
                v.extend([2, -2]);
            }
            v.extend([2, -2 * m]);
            v
        }
        FamilyId::Genus2General => {
            let [x, y, z, w] = [params[0], params[1], params[2], params[3]];
            vec![2 * x, -2 * y, 2 * z, -2 * w]
        }
        FamilyId::Genus2A => vec![2 * params[0], -2, 2, -2 * params[1]],
        FamilyId::Genus2B => vec![2 * params[0], -4, 2, -2],
        FamilyId::Genus3Y => vec![2 * params[0], -2, 4, -2, 2, -2 * params[1]],
        FamilyId::Genus3X => vec![2 * params[0], -4, 2, -2, 2, -2 * params[1]],
        FamilyId::Genus3Final => vec![2 * params[0], -2, 2, -2, 2, -2 * params[1]],
    };
    ConwayForm::from_entries(&text)
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn frac(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// The closed forms exactly as stated, including the entries listed in
/// [`FamilyId::known_typos`].
pub fn family_closed_form(f: FamilyId, params: &[i64]) -> Result<ClosedForm> {
    f.check_arity(params)?;
    let cf = match f {
        FamilyId::BgChain => {
            let (b, g) = (params[0], params[1]);
            ClosedForm {
                a2: frac((2 * b + g - 1) * g, 2),
                a4: Some(frac((4 * b + g - 2) * g * (g * g - 1), 24)),
                four_v3: Some(frac(g * (b * b + b + g - 1), 2)),
                det: q(4 * b * g - 2 * g + 1),
            }
        }
        FamilyId::Genus4TwoParam => {
            let (g, b, c) = (params[0], params[1], -params[2]);
            // the display also names b_1 and c_g, which are 1 and -1 here
            let (b1, cg) = (1, -1);
            ClosedForm {
                a2: q(-b * c + b * g - c * g - b + c) + frac(g * g - 3 * g + 2, 2),
                a4: None,
                four_v3: None,
                det: q(-8 * b * c * g + 4 * b1 * c - 4 * b * g + 4 * c * g + 4 * b - 4 * cg + 2 * g - 3),
            }
        }
        FamilyId::Genus2General => {
            let [x, y, z, w] = [params[0], params[1], params[2], params[3]];
            ClosedForm {
                a2: q(z * w + x * w + x * y),
                a4: None,
                four_v3: None,
                det: q(16 * x * y * z * w - 4 * y * x - 4 * z * w - 4 * x * w + 1),
            }
        }
        FamilyId::Genus2A => {
            let (x, w) = (params[0], params[1]);
            ClosedForm {
                a2: q(x * w + x + w),
                a4: Some(q(x * w)),
                four_v3: Some(frac(x * x * w + w * w * x + x * x + w * w + x + w, 2)),
                det: q(12 * x * w - 4 * x - 4 * w + 1),
            }
        }
        FamilyId::Genus2B => {
            // genus2_general at (x, 2, 1, 1)
            let x = params[0];
            ClosedForm {
                a2: q(3 * x + 1),
                a4: None,
                four_v3: None,
                det: q(20 * x - 3),
            }
        }
        FamilyId::Genus3Y => {
            let (x, v) = (params[0], params[1]);
            ClosedForm {
                a2: q(x * v + 2 * x + 3 * v + 2),
                a4: None,
                four_v3: None,
                det: q(68 * x * v - 24 * x - 20 * v + 7),
            }
        }
        FamilyId::Genus3X => {
            let (x, v) = (params[0], params[1]);
            ClosedForm {
                a2: q(x * v + 2 * v + 3 * x + 1),
                a4: None,
                four_v3: None,
                det: q(52 * x * v - 20 * x - 8 * v + 3),
            }
        }
        FamilyId::Genus3Final => {
            let (x, v) = (params[0], params[1]);
            ClosedForm {
                a2: q(x * v + 2 * x + 2 * v + 1),
                a4: None,
                four_v3: None,
                det: q(20 * x * v - 8 * x - 8 * v + 3),
            }
        }
    };
    Ok(cf)
}

/// Engine values on the family form, restricted to the fields the closed
/// form states. `a_2`, `a_4` come from the Conway polynomial, `4v_3` from
/// the Jones polynomial and `det` from the fraction recurrence.
pub fn family_engine_values(f: FamilyId, params: &[i64]) -> Result<ClosedForm> {
    let stated = family_closed_form(f, params)?;
    let k = family_form(f, params)?;
    let int = |v: BigInt| Rational::from_integer(v);
    let four_v3 = match stated.four_v3 {
        Some(_) => Some(jones::v3_from_jones(&k)? * q(4)),
        None => None,
    };
    Ok(ClosedForm {
        a2: int(seifert::a2(&k)),
        a4: stated.a4.as_ref().map(|_| int(seifert::a4(&k))),
        four_v3,
        det: int(k.determinant()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub field: Field,
    #[serde(serialize_with = "serialize_rational")]
    pub stated: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub engine: Rational,
    pub known_typo: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyCheck {
    pub family: FamilyId,
    pub params: Vec<i64>,
    pub form: String,
    pub stated: ClosedForm,
    pub engine: ClosedForm,
    pub discrepancies: Vec<Discrepancy>,
}

impl FamilyCheck {
    /// True when every disagreement is on the known typo list.
    pub fn ok(&self) -> bool {
        self.discrepancies.iter().all(|d| d.known_typo)
    }
}

pub fn family_check(f: FamilyId, params: &[i64]) -> Result<FamilyCheck> {
    let stated = family_closed_form(f, params)?;
    let engine = family_engine_values(f, params)?;
    let k = family_form(f, params)?;
    let discrepancies = [Field::A2, Field::A4, Field::FourV3, Field::Det]
        .into_iter()
        .filter_map(|field| {
            let (s, e) = (stated.get(field)?, engine.get(field)?);
            (s != e).then(|| Discrepancy {
                field,
                stated: s.clone(),
                engine: e.clone(),
                known_typo: f.known_typos().contains(&field),
            })
        })
        .collect();
    Ok(FamilyCheck {
        family: f,
        params: params.to_vec(),
        form: k.to_string(),
        stated,
        engine,
        discrepancies,
    })
}

fn genus2_expression(x: i64, y: i64, z: i64, w: i64) -> i64 {
    4 * x * y * z * w - 3 * y * x - 3 * z * w - 3 * x * w + 2
}

/// Main obstruction on `C[2x, -2y, 2z, -2w]`, in its strict form.
pub fn genus2_criterion(x: i64, y: i64, z: i64, w: i64) -> bool {
    genus2_expression(x, y, z, w) > 0
}

/// The same expression with a non-strict inequality.
pub fn genus2_criterion_nonstrict(x: i64, y: i64, z: i64, w: i64) -> bool {
    genus2_expression(x, y, z, w) >= 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conway::parse;

    fn k(s: &str) -> ConwayForm {
        parse(s).unwrap()
    }

    #[test]
    fn a2_examples() {
        assert_eq!(a2_gauss(&k("2,-2")), 1.into());
        for (x, y, z, w) in [(1, 2, 3, 4), (2, 1, 1, 3), (5, 5, 1, 2)] {
            let form = family_form(FamilyId::Genus2General, &[x, y, z, w]).unwrap();
            assert_eq!(a2_gauss(&form), (z * w + x * w + x * y).into());
        }
        for (bg, g) in [(1, 1), (3, 2), (2, 5)] {
            let form = family_form(FamilyId::BgChain, &[bg, g]).unwrap();
            assert_eq!(a2_gauss(&form), ((2 * bg + g - 1) * g / 2).into());
        }
    }

    #[test]
    fn four_v3_examples() {
        assert_eq!(four_v3_gauss(&k("2,-2")), 1.into());
        assert_eq!(v3_gauss(&k("2,-2")), frac(1, 4));
        // T(2,5), T(2,7)
        assert_eq!(four_v3_gauss(&k("2,-2,2,-2")), 5.into());
        assert_eq!(four_v3_gauss(&k("2,-2,2,-2,2,-2")), 14.into());
        // C[2x,-2,2,-2w]: stated value plus 2xw
        for (x, w) in [(1, 1), (2, 2), (3, 1), (4, 7)] {
            let form = family_form(FamilyId::Genus2A, &[x, w]).unwrap();
            let twice = x * x * w + w * w * x + x * x + w * w + x + w;
            assert_eq!(four_v3_gauss(&form), (twice / 2 + 2 * x * w).into());
        }
    }

    #[test]
    fn gauss_matches_other_routes_on_small_forms() {
        for text in [
            "4,-2",
            "2,-6",
            "4,-2,2,-4",
            "2,-4,6,-2",
            "2,-2,4,-2,2,-6",
            "6,-4,2,-2,4,-2,2,-2",
        ] {
            let form = k(text);
            assert_eq!(a2_gauss(&form), seifert::a2(&form), "{text}");
            assert_eq!(v3_gauss(&form), jones::v3_from_jones(&form).unwrap(), "{text}");
        }
    }

    #[test]
    fn family_examples() {
        let chain = family_closed_form(FamilyId::BgChain, &[2, 4]).unwrap();
        assert_eq!(chain.det, q(25));
        let a = family_check(FamilyId::Genus2A, &[2, 2]).unwrap();
        assert_eq!(a.form, "C[4,-2,2,-4]");
        assert_eq!(a.stated.a2, q(8));
        assert_eq!(a.stated.a4, Some(q(4)));
        assert_eq!(a.stated.det, q(33));
        assert_eq!(a.stated.four_v3, Some(q(14)));
        assert_eq!(a.engine.four_v3, Some(q(22)));
        assert!(a.ok());
        let y = family_closed_form(FamilyId::Genus3Y, &[1, 1]).unwrap();
        assert_eq!((y.det, y.a2), (q(31), q(8)));
    }

    #[test]
    fn family_forms() {
        assert_eq!(
            family_form(FamilyId::BgChain, &[3, 3]).unwrap().to_string(),
            "C[6,-2,2,-2,2,-2]"
        );
        assert_eq!(
            family_form(FamilyId::Genus4TwoParam, &[4, 2, 3]).unwrap().to_string(),
            "C[4,-2,2,-2,2,-2,2,-6]"
        );
        assert_eq!(
            family_form(FamilyId::Genus2B, &[5]).unwrap().to_string(),
            "C[10,-4,2,-2]"
        );
        assert_eq!(
            family_form(FamilyId::Genus3Final, &[2, 3]).unwrap().to_string(),
            "C[4,-2,2,-2,2,-6]"
        );
    }

    #[test]
    fn arity_is_checked() {
        assert!(matches!(
            family_closed_form(FamilyId::Genus2A, &[1]),
            Err(Error::Arity {
                expected: 2,
                got: 1,
                ..
            })
        ));
        assert!(family_closed_form(FamilyId::Genus3X, &[0, 1]).is_err());
        assert_eq!("genus3_y".parse::<FamilyId>().unwrap(), FamilyId::Genus3Y);
        assert!("genus9".parse::<FamilyId>().is_err());
    }

    #[test]
    fn genus4_stated_det_differs_from_recurrence() {
        let c = family_check(FamilyId::Genus4TwoParam, &[4, 2, 1]).unwrap();
        assert_eq!(c.discrepancies.len(), 1);
        assert_eq!(c.discrepancies[0].field, Field::Det);
        assert!(c.ok());
        // reading b_1 -> b_g and c_g -> c_1 restores agreement
        for g in 2..8 {
            for b in 1..6 {
                for m in 1..6 {
                    let cc = -m;
                    let det = -8 * b * cc * g + 4 * b * cc - 4 * b * g + 4 * cc * g + 4 * b - 4 * cc + 2 * g - 3;
                    let form = family_form(FamilyId::Genus4TwoParam, &[g, b, m]).unwrap();
                    assert_eq!(form.determinant(), det.into());
                }
            }
        }
    }

    #[test]
    fn genus2_criterion_examples() {
        assert!(!genus2_criterion(1, 1, 1, 1));
        assert!(genus2_criterion(2, 2, 2, 2));
        assert!(!genus2_criterion(1, 2, 1, 2));
        assert!(genus2_criterion_nonstrict(1, 2, 1, 2));
    }
}
