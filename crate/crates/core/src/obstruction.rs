//! Chirally cosmetic surgery obstructions on positive 2-bridge knots.
//!
//! A pair of chirally cosmetic surgeries `S^3_K(p/q) = -S^3_K(p/q')`
//! pins `p/(q+q')` twice: once from the degree-two part of the LMO
//! invariant and once from Heegaard Floer homology. The two values must
//! agree, and the Casson-Walker/Casson-Gordon relation together with
//! signature densities bounds them. Verdicts use only exact arithmetic on
//! `det`, `g`, `a_2`, `a_4` and `4v_3`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::conway::ConwayForm;
use crate::error::{Error, Result};
use crate::exactalg::{ratio, serialize_bigint, serialize_rational, Rational};
use crate::seifert::{self, SignatureMethod};
use crate::{gauss_forms, torus_sig};

/// The finite-type and classical invariants a verdict depends on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub g: usize,
    #[serde(serialize_with = "serialize_bigint")]
    pub det: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub a2: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub a4: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub four_v3: BigInt,
}

impl Invariants {
    /// Fraction recurrence for `det`, Gauss formulas for `a_2` and `4v_3`,
    /// Conway polynomial for `a_4`.
    pub fn compute(k: &ConwayForm) -> Self {
        Self {
            g: k.genus(),
            det: k.determinant(),
            a2: gauss_forms::a2_gauss(k),
            a4: seifert::a4(k),
            four_v3: gauss_forms::four_v3_gauss(k),
        }
    }

    /// `7a_2^2 - a_2 - 10a_4`
    fn lmo_numerator(&self) -> BigInt {
        BigInt::from(7) * &self.a2 * &self.a2 - &self.a2 - BigInt::from(10) * &self.a4
    }

    /// `det + 6g - 5`
    fn hf_quantity(&self) -> BigInt {
        &self.det + BigInt::from(6 * self.g as i64 - 5)
    }
}

/// `p/(q+q') = (7a_2^2 - a_2 - 10a_4) / (2 * 4v_3)`.
pub fn slope_lmo(inv: &Invariants) -> Result<Rational> {
    if inv.four_v3.is_zero() {
        return Err(Error::Precondition("4v3 = 0, the LMO slope is undefined".into()));
    }
    Ok(Rational::new(inv.lmo_numerator(), BigInt::from(2) * &inv.four_v3))
}

/// `p/(q+q') = (det + 6g - 5)/4`.
pub fn slope_hf(inv: &Invariants) -> Rational {
    Rational::new(inv.hf_quantity(), BigInt::from(4))
}

pub fn slope_candidate_lmo(k: &ConwayForm) -> Result<Rational> {
    slope_lmo(&Invariants::compute(k))
}

pub fn slope_candidate_hf(k: &ConwayForm) -> Rational {
    slope_hf(&Invariants::compute(k))
}

/// True when the two slope candidates disagree, i.e.
/// `2(7a_2^2 - a_2 - 10a_4)/4v_3 != det + 6g - 5`.
pub fn equality_violated(inv: &Invariants) -> Result<bool> {
    let lhs = slope_lmo(inv)? * Rational::from_integer(4.into());
    Ok(lhs != Rational::from_integer(inv.hf_quantity()))
}

/// `det + 6g - 5 > 176 a_2/(10g)` for `g >= 6`, `> 16 a_2/g` for `g <= 5`.
pub fn main_inequality(inv: &Invariants) -> bool {
    let g = BigInt::from(inv.g as i64);
    let lhs = Rational::from_integer(inv.hf_quantity());
    let rhs = if inv.g >= 6 {
        Rational::new(BigInt::from(176) * &inv.a2, BigInt::from(10) * g)
    } else {
        Rational::new(BigInt::from(16) * &inv.a2, g)
    };
    lhs > rhs
}

pub fn equality_obstruction(k: &ConwayForm) -> Result<bool> {
    equality_violated(&Invariants::compute(k))
}

pub fn main_obstruction(k: &ConwayForm) -> bool {
    main_inequality(&Invariants::compute(k))
}

/// `12 (q+q') a_2 = 3 sigma(K, p)`.
pub fn cw_cg_relation(k: &ConwayForm, p: u32, qsum: i64) -> Result<bool> {
    cw_cg_relation_with(&seifert::CertifiedSignature::default(), k, p, qsum)
}

pub fn cw_cg_relation_with(method: &dyn SignatureMethod, k: &ConwayForm, p: u32, qsum: i64) -> Result<bool> {
    if qsum == 0 {
        return Err(Error::Precondition("q + q' must be nonzero".into()));
    }
    let sigma = method.total_signature(k, p)?;
    Ok(BigInt::from(12 * qsum) * gauss_forms::a2_gauss(k) == BigInt::from(3 * sigma))
}

/// Extremes of `sigma(K, p)/(g p)` over `N <= p <= p_max`. They bracket the
/// upper and lower densities over `p >= N` from the inside.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityEstimate {
    #[serde(rename = "N")]
    pub n: u32,
    pub p_max: u32,
    #[serde(serialize_with = "serialize_rational")]
    pub window_min: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub window_max: Rational,
    /// Minimum of the same ratio for `T(2, 2g+1)`.
    #[serde(serialize_with = "serialize_rational")]
    pub torus_lower_bound: Rational,
    /// Analytic floor for the torus ratio over all `p >= 11`, attached when `N = 11`.
    #[serde(serialize_with = "serialize_opt_rational")]
    pub analytic_floor: Option<Rational>,
}

fn serialize_opt_rational<S: serde::Serializer>(q: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => serialize_rational(q, s),
        None => s.serialize_none(),
    }
}

pub fn signature_density(k: &ConwayForm, n: u32, p_max: u32) -> Result<DensityEstimate> {
    signature_density_with(&seifert::CertifiedSignature::default(), k, n, p_max)
}

pub fn signature_density_with(
    method: &dyn SignatureMethod,
    k: &ConwayForm,
    n: u32,
    p_max: u32,
) -> Result<DensityEstimate> {
    if n < 2 || n > p_max {
        return Err(Error::Precondition(format!(
            "need 2 <= N <= p_max, got N={n}, p_max={p_max}"
        )));
    }
    let g = k.genus() as i64;
    let mut ratios = Vec::new();
    let mut torus = Vec::new();
    for p in n..=p_max {
        let sigma = method.total_signature(k, p)?;
        ratios.push(ratio(sigma, g * p as i64));
        let t = torus_sig::total_sig_torus_2_odd(g as u64, p as u64);
        torus.push(ratio(t, g * p as i64));
    }
    let min = |v: &[Rational]| v.iter().min().cloned().expect("nonempty window");
    let max = |v: &[Rational]| v.iter().max().cloned().expect("nonempty window");
    Ok(DensityEstimate {
        n,
        p_max,
        window_min: min(&ratios),
        window_max: max(&ratios),
        torus_lower_bound: min(&torus),
        analytic_floor: (n == 11).then(|| torus_sig::density_floor(g as u64)),
    })
}

/// The two slopes of the known chirally cosmetic pair on the
/// `(2, k)`-torus knot, before reduction: numerators agree.
pub fn known_ccs_slopes_unreduced(kparam: i64, m: i64) -> Result<((i64, i64), (i64, i64))> {
    if kparam < 3 || kparam % 2 == 0 {
        return Err(Error::Precondition(format!(
            "k must be odd and at least 3, got {kparam}"
        )));
    }
    let num = 2 * kparam * kparam * (2 * m + 1);
    let base = kparam * (2 * m + 1);
    Ok(((num, base + 1), (num, base - 1)))
}

/// `(2k^2(2m+1)/(k(2m+1)+1), 2k^2(2m+1)/(k(2m+1)-1))` in lowest terms.
pub fn known_ccs_slopes(kparam: i64, m: i64) -> Result<(Rational, Rational)> {
    let ((n1, d1), (n2, d2)) = known_ccs_slopes_unreduced(kparam, m)?;
    Ok((ratio(n1, d1), ratio(n2, d2)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    #[serde(rename = "excluded_torus_2k")]
    ExcludedTorus2k,
    NoCcsMain,
    NoCcsEquality,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::ExcludedTorus2k => "excluded_torus_2k",
            Verdict::NoCcsMain => "no_ccs_main",
            Verdict::NoCcsEquality => "no_ccs_equality",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A verdict-producing obstruction, registered by name.
pub trait Obstruction: Send + Sync {
    fn name(&self) -> &'static str;
    /// The verdict issued when this obstruction fires.
    fn verdict(&self) -> Verdict;
    fn obstructs(&self, inv: &Invariants) -> Result<bool>;
}

pub struct MainObstruction;

impl Obstruction for MainObstruction {
    fn name(&self) -> &'static str {
        "main"
    }

    fn verdict(&self) -> Verdict {
        Verdict::NoCcsMain
    }

    fn obstructs(&self, inv: &Invariants) -> Result<bool> {
        Ok(main_inequality(inv))
    }
}

pub struct EqualityObstruction;

impl Obstruction for EqualityObstruction {
    fn name(&self) -> &'static str {
        "equality"
    }

    fn verdict(&self) -> Verdict {
        Verdict::NoCcsEquality
    }

    fn obstructs(&self, inv: &Invariants) -> Result<bool> {
        equality_violated(inv)
    }
}

/// Recorded hypotheses of the obstruction. The first two are
/// checked numerically; the others hold for every positive 2-bridge knot
/// that is not a `(2, k)`-torus knot and are recorded, not computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    pub a2_gt_1: bool,
    pub four_v3_positive: bool,
    pub thin: bool,
    pub not_l_space: bool,
    pub genus_equals_tau: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityWindow {
    #[serde(serialize_with = "serialize_rational")]
    pub min: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub max: Rational,
    pub p_range: (u32, u32),
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub key: String,
    pub g: usize,
    #[serde(serialize_with = "serialize_bigint")]
    pub det: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub a2: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub a4: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub four_v3: BigInt,
    #[serde(serialize_with = "serialize_rational")]
    pub slope_lmo: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub slope_hf: Rational,
    pub main_ineq: bool,
    pub equality_violated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density_window: Option<DensityWindow>,
    pub verdict: Verdict,
    pub hypotheses: Hypotheses,
}

impl ObstructionReport {
    pub fn attach_density(&mut self, d: &DensityEstimate) {
        self.density_window = Some(DensityWindow {
            min: d.window_min.clone(),
            max: d.window_max.clone(),
            p_range: (d.n, d.p_max),
        });
    }
}

/// Main obstruction first, then the slope equality.
pub static DEFAULT_CHAIN: [&dyn Obstruction; 2] = [&MainObstruction, &EqualityObstruction];

pub fn verdict(k: &ConwayForm) -> Result<ObstructionReport> {
    report_from_invariants(k, &Invariants::compute(k), &DEFAULT_CHAIN)
}

/// Builds the report from precomputed invariants, trying the obstructions
/// in order; the first that fires decides the verdict.
pub fn report_from_invariants(
    k: &ConwayForm,
    inv: &Invariants,
    chain: &[&dyn Obstruction],
) -> Result<ObstructionReport> {
    let torus = k.is_torus_2k();
    let hypotheses = Hypotheses {
        a2_gt_1: inv.a2 > BigInt::from(1),
        four_v3_positive: inv.four_v3.is_positive(),
        thin: true,
        not_l_space: !torus,
        genus_equals_tau: true,
    };
    if !torus && !(hypotheses.a2_gt_1 && hypotheses.four_v3_positive) {
        return Err(Error::Internal(format!(
            "{k}: expected a2 > 1 and 4v3 > 0, got a2 = {}, 4v3 = {}",
            inv.a2, inv.four_v3
        )));
    }
    let verdict = if torus {
        Verdict::ExcludedTorus2k
    } else {
        let mut v = Verdict::Inconclusive;
        for o in chain {
            if o.obstructs(inv)? {
                v = o.verdict();
                break;
            }
        }
        v
    };
    Ok(ObstructionReport {
        key: k.key(),
        g: inv.g,
        det: inv.det.clone(),
        a2: inv.a2.clone(),
        a4: inv.a4.clone(),
        four_v3: inv.four_v3.clone(),
        slope_lmo: slope_lmo(inv)?,
        slope_hf: slope_hf(inv),
        main_ineq: main_inequality(inv),
        equality_violated: equality_violated(inv)?,
        density_window: None,
        verdict,
        hypotheses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conway::parse;
    use crate::gauss_forms::{family_form, genus2_criterion, FamilyId};

    fn k(s: &str) -> ConwayForm {
        parse(s).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        ratio(n, d)
    }

    #[test]
    fn verdict_names_match_display() {
        for v in [
            Verdict::ExcludedTorus2k,
            Verdict::NoCcsMain,
            Verdict::NoCcsEquality,
            Verdict::Inconclusive,
        ] {
            assert_eq!(serde_json::to_value(v).unwrap(), serde_json::Value::from(v.as_str()));
        }
    }

    #[test]
    fn lmo_slopes() {
        assert_eq!(slope_candidate_lmo(&k("4,-2,2,-4")).unwrap(), q(100, 11));
        assert_eq!(slope_candidate_lmo(&k("2,-2,2,-2")).unwrap(), q(5, 1));
        assert_eq!(slope_candidate_lmo(&k("2,-2")).unwrap(), q(3, 1));
        let zero = Invariants {
            g: 1,
            det: 1.into(),
            a2: 0.into(),
            a4: 0.into(),
            four_v3: 0.into(),
        };
        assert!(slope_lmo(&zero).is_err());
    }

    #[test]
    fn hf_slopes() {
        assert_eq!(slope_candidate_hf(&k("4,-2,2,-4")), q(10, 1));
        assert_eq!(slope_candidate_hf(&k("2,-2")), q(1, 1));
        assert_eq!(slope_candidate_hf(&k("2,-2,2,-2")), q(3, 1));
    }

    #[test]
    fn equality_examples() {
        assert!(equality_obstruction(&k("4,-2,2,-4")).unwrap());
        assert!(equality_obstruction(&k("2,-2,2,-2")).unwrap());
        assert!(equality_obstruction(&k("2,-4,2,-2")).unwrap());
    }

    #[test]
    fn main_examples() {
        assert!(!main_obstruction(&k("2,-2,2,-2")));
        assert!(!main_obstruction(&k("4,-4")));
        for x in 1..=10 {
            for v in 1..=10 {
                assert!(main_obstruction(&family_form(FamilyId::Genus3Y, &[x, v]).unwrap()));
            }
        }
    }

    #[test]
    fn genus2_criterion_agrees_with_main() {
        for x in 1..=6 {
            for y in 1..=6 {
                for z in 1..=6 {
                    for w in 1..=6 {
                        let form = family_form(FamilyId::Genus2General, &[x, y, z, w]).unwrap();
                        assert_eq!(genus2_criterion(x, y, z, w), main_obstruction(&form), "{form}");
                    }
                }
            }
        }
    }

    #[test]
    fn cw_cg_examples() {
        let t = k("2,-2");
        assert!(cw_cg_relation(&t, 6, 2).unwrap());
        assert!(!cw_cg_relation(&t, 6, 1).unwrap());
        assert!(matches!(cw_cg_relation(&t, 6, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn trefoil_density() {
        let d = signature_density(&k("2,-2"), 2, 6).unwrap();
        assert_eq!(d.window_min, q(1, 1));
        assert_eq!(d.window_max, q(8, 5));
        assert_eq!(d.analytic_floor, None);
        assert!(signature_density(&k("2,-2"), 7, 6).is_err());
    }

    #[test]
    fn density_floor_attached_at_eleven() {
        let d = signature_density(&k("2,-4"), 11, 13).unwrap();
        assert_eq!(d.analytic_floor, Some(q(1, 1)));
        assert!(d.torus_lower_bound >= q(1, 1));
        assert_eq!(torus_sig::density_floor(6), q(10, 11));
    }

    #[test]
    fn known_slopes() {
        assert_eq!(known_ccs_slopes(3, 0).unwrap(), (q(9, 2), q(9, 1)));
        assert_eq!(known_ccs_slopes(3, -1).unwrap(), (q(9, 1), q(9, 2)));
        assert_eq!(known_ccs_slopes(5, 0).unwrap(), (q(25, 3), q(25, 2)));
        assert!(known_ccs_slopes(4, 0).is_err());
        assert!(known_ccs_slopes(1, 0).is_err());
    }

    #[test]
    fn verdicts() {
        for g in 1..=5 {
            let r = verdict(&ConwayForm::torus(g)).unwrap();
            assert_eq!(r.verdict, Verdict::ExcludedTorus2k);
        }
        assert_eq!(verdict(&k("2,-2,4,-2,2,-2")).unwrap().verdict, Verdict::NoCcsMain);
        let r = verdict(&k("4,-2,2,-4")).unwrap();
        assert_eq!(r.verdict, Verdict::NoCcsEquality);
        assert!(r.equality_violated && !r.main_ineq);
    }

    #[test]
    fn report_json_fields() {
        let r = verdict(&k("4,-2,2,-4")).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["det"], 33);
        assert_eq!(v["a2"], 8);
        assert_eq!(v["a4"], 4);
        assert_eq!(v["four_v3"], 22);
        assert_eq!(v["slope_lmo"], "100/11");
        assert_eq!(v["slope_hf"], "10");
        assert_eq!(v["verdict"], "no_ccs_equality");
        assert!(v.get("density_window").is_none());
    }
}
