//! Named strategy registries. Every interchangeable computation sits behind
//! a trait object and is selected by name at runtime.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::conway::ConwayForm;
use crate::error::{Error, Result};
use crate::exactalg::LaurentPolynomial;
use crate::obstruction::{EqualityObstruction, Invariants, MainObstruction, Obstruction};
use crate::seifert::{CertifiedSignature, EigenF64Signature, PrecisionConfig, SignatureMethod};
use crate::{gauss_forms, jones, seifert};

/// An integer invariant of a Conway form computed one particular way.
pub trait InvariantRoute: Send + Sync {
    fn name(&self) -> &'static str;
    fn compute(&self, k: &ConwayForm) -> Result<BigInt>;
}

/// A way of computing the Kauffman bracket of the Conway diagram.
pub trait BracketMethod: Send + Sync {
    fn name(&self) -> &'static str;
    fn bracket(&self, k: &ConwayForm) -> Result<LaurentPolynomial>;
}

struct FnRoute {
    name: &'static str,
    f: fn(&ConwayForm) -> Result<BigInt>,
}

impl InvariantRoute for FnRoute {
    fn name(&self) -> &'static str {
        self.name
    }

    fn compute(&self, k: &ConwayForm) -> Result<BigInt> {
        (self.f)(k)
    }
}

pub struct TransferBracket;

impl BracketMethod for TransferBracket {
    fn name(&self) -> &'static str {
        "transfer"
    }

    fn bracket(&self, k: &ConwayForm) -> Result<LaurentPolynomial> {
        Ok(jones::kauffman_bracket(k))
    }
}

pub struct StateSumBracket;

impl BracketMethod for StateSumBracket {
    fn name(&self) -> &'static str {
        "state-sum"
    }

    fn bracket(&self, k: &ConwayForm) -> Result<LaurentPolynomial> {
        jones::kauffman_bracket_state_sum(k)
    }
}

/// Trait objects of one kind, in registration order.
pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: Vec<(&'static str, Box<T>)>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: Vec::new(),
        }
    }

    /// Adds or replaces the entry under `name`.
    pub fn register(&mut self, name: &'static str, item: Box<T>) {
        match self.entries.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => slot.1 = item,
            None => self.entries.push((name, item)),
        }
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, item)| item.as_ref())
            .ok_or_else(|| Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|(n, _)| *n).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &T)> {
        self.entries.iter().map(|(n, item)| (*n, item.as_ref()))
    }

    pub fn kind(&self) -> &'static str {
        self.kind
    }
}

fn abs_eval_minus_one(p: LaurentPolynomial) -> BigInt {
    p.eval_at_minus_one().abs()
}

fn z_coefficient(p: &LaurentPolynomial, e: i64) -> BigInt {
    p.coeff(e)
}

/// All built-in strategies.
pub struct Strategies {
    pub det: Registry<dyn InvariantRoute>,
    pub a2: Registry<dyn InvariantRoute>,
    pub four_v3: Registry<dyn InvariantRoute>,
    pub signature: Registry<dyn SignatureMethod>,
    pub bracket: Registry<dyn BracketMethod>,
    pub obstruction: Registry<dyn Obstruction>,
}

impl Strategies {
    pub fn builtin() -> Self {
        Self::with_precision(PrecisionConfig::default())
    }

    pub fn with_precision(precision: PrecisionConfig) -> Self {
        let route = |name, f| Box::new(FnRoute { name, f }) as Box<dyn InvariantRoute>;

        let mut det = Registry::new("det route");
        det.register("recurrence", route("recurrence", |k| Ok(k.determinant())));
        det.register("seifert", route("seifert", |k| Ok(seifert::symmetrized_determinant(k))));
        det.register(
            "alexander",
            route("alexander", |k| {
                Ok(abs_eval_minus_one(seifert::alexander_polynomial(k)))
            }),
        );
        det.register(
            "jones",
            route("jones", |k| Ok(abs_eval_minus_one(jones::jones_polynomial(k)?))),
        );

        let mut a2 = Registry::new("a2 route");
        a2.register("gauss", route("gauss", |k| Ok(gauss_forms::a2_gauss(k))));
        a2.register("conway", route("conway", |k| Ok(seifert::a2(k))));
        a2.register(
            "expansion",
            route("expansion", |k| {
                Ok(z_coefficient(&seifert::conway_polynomial_by_expansion(k)?, 2))
            }),
        );

        let mut four_v3 = Registry::new("4v3 route");
        four_v3.register("gauss", route("gauss", |k| Ok(gauss_forms::four_v3_gauss(k))));
        four_v3.register(
            "jones",
            route("jones", |k| {
                let v = jones::v3_from_jones(k)? * crate::exactalg::Rational::from_integer(4.into());
                if !v.is_integer() {
                    return Err(Error::Internal(format!("{k}: 4v3 = {v} is not an integer")));
                }
                Ok(v.to_integer())
            }),
        );

        let mut signature: Registry<dyn SignatureMethod> = Registry::new("signature method");
        signature.register("certified", Box::new(CertifiedSignature { precision }));
        signature.register("eigen-f64", Box::new(EigenF64Signature));

        let mut bracket: Registry<dyn BracketMethod> = Registry::new("bracket method");
        bracket.register("transfer", Box::new(TransferBracket));
        bracket.register("state-sum", Box::new(StateSumBracket));

        let mut obstruction: Registry<dyn Obstruction> = Registry::new("obstruction");
        obstruction.register("main", Box::new(MainObstruction));
        obstruction.register("equality", Box::new(EqualityObstruction));

        Self {
            det,
            a2,
            four_v3,
            signature,
            bracket,
            obstruction,
        }
    }

    /// Invariants with the routes named in `sel`; `a_4` always comes from
    /// the Conway polynomial.
    pub fn invariants(&self, sel: &Selection, k: &ConwayForm) -> Result<Invariants> {
        Ok(Invariants {
            g: k.genus(),
            det: self.det.get(&sel.det)?.compute(k)?,
            a2: self.a2.get(&sel.a2)?.compute(k)?,
            a4: seifert::a4(k),
            four_v3: self.four_v3.get(&sel.four_v3)?.compute(k)?,
        })
    }

    /// The obstruction chain named in `sel`, in order.
    pub fn obstruction_chain(&self, sel: &Selection) -> Result<Vec<&dyn Obstruction>> {
        sel.obstructions.iter().map(|n| self.obstruction.get(n)).collect()
    }

    /// Checks that every name in `sel` is registered.
    pub fn validate(&self, sel: &Selection) -> Result<()> {
        self.det.get(&sel.det)?;
        self.a2.get(&sel.a2)?;
        self.four_v3.get(&sel.four_v3)?;
        self.signature.get(&sel.signature)?;
        self.bracket.get(&sel.bracket)?;
        self.obstruction_chain(sel)?;
        Ok(())
    }
}

/// Strategy names chosen for a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Selection {
    pub det: String,
    pub a2: String,
    pub four_v3: String,
    pub signature: String,
    pub bracket: String,
    pub obstructions: Vec<String>,
}

impl Default for Selection {
    fn default() -> Self {
        Self {
            det: "recurrence".into(),
            a2: "gauss".into(),
            four_v3: "gauss".into(),
            signature: "certified".into(),
            bracket: "transfer".into(),
            obstructions: vec!["main".into(), "equality".into()],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conway::parse;

    #[test]
    fn routes_agree_on_a_sample() {
        let s = Strategies::builtin();
        let k = parse("4,-2,2,-4").unwrap();
        for (_, r) in s.det.iter() {
            assert_eq!(r.compute(&k).unwrap(), 33.into(), "{}", r.name());
        }
        for (_, r) in s.a2.iter() {
            assert_eq!(r.compute(&k).unwrap(), 8.into(), "{}", r.name());
        }
        for (_, r) in s.four_v3.iter() {
            assert_eq!(r.compute(&k).unwrap(), 22.into(), "{}", r.name());
        }
        let t = s.bracket.get("transfer").unwrap().bracket(&k).unwrap();
        assert_eq!(s.bracket.get("state-sum").unwrap().bracket(&k).unwrap(), t);
    }

    #[test]
    fn unknown_names_list_alternatives() {
        let s = Strategies::builtin();
        match s.signature.get("exact") {
            Err(Error::UnknownStrategy { available, .. }) => assert_eq!(available, "certified, eigen-f64"),
            other => panic!("unexpected {:?}", other.map(|m| m.name())),
        }
        let sel = Selection {
            obstructions: vec!["main".into(), "nope".into()],
            ..Selection::default()
        };
        assert!(s.validate(&sel).is_err());
        assert!(s.validate(&Selection::default()).is_ok());
    }

    #[test]
    fn selection_from_toml() {
        let sel: Selection = toml::from_str("signature = \"eigen-f64\"\nobstructions = [\"equality\"]").unwrap();
        assert_eq!(sel.signature, "eigen-f64");
        assert_eq!(sel.det, "recurrence");
        assert!(toml::from_str::<Selection>("colour = \"red\"").is_err());
    }

    #[test]
    fn registration_replaces() {
        let mut r: Registry<dyn BracketMethod> = Registry::new("bracket method");
        r.register("x", Box::new(TransferBracket));
        r.register("x", Box::new(StateSumBracket));
        assert_eq!(r.names(), ["x"]);
        assert_eq!(r.get("x").unwrap().name(), "state-sum");
    }
}
