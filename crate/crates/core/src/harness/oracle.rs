//! Cross-checks between independent computations of the same invariant.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Deserialize;

use crate::conway::ConwayForm;
use crate::error::Result;
use crate::exactalg::{rational_to_string, Rational};
use crate::gauss_forms::{self, family_check, family_closed_form, FamilyId};
use crate::registry::{Selection, Strategies};
use crate::seifert::{self, SignatureMethod};
use crate::{jones, torus_sig};

use super::enumerate::{enumerate, EnumerationSpec};
use super::report::{RunReport, SuiteResult};

/// Corpus sizes for the suites.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    pub a2_max: i64,
    pub four_v3_max: i64,
    pub det_max: i64,
    pub expansion_max: i64,
    pub bracket_max: i64,
    pub signature_max: i64,
    pub signature_p_max: u32,
    pub torus_gate_g: u64,
    pub torus_gate_p: u32,
    pub bounds_n: u64,
    pub density_g: u64,
    pub density_p: (u64, u64),
    pub family_grid: i64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            a2_max: 14,
            four_v3_max: 12,
            det_max: 12,
            expansion_max: 9,
            bracket_max: 7,
            signature_max: 7,
            signature_p_max: 8,
            torus_gate_g: 5,
            torus_gate_p: 24,
            bounds_n: 80,
            density_g: 12,
            density_p: (11, 60),
            family_grid: 8,
        }
    }
}

impl OracleConfig {
    /// Caps every knot corpus at `s(K) <= n`.
    pub fn with_max_complexity(n: i64) -> Self {
        let d = Self::default();
        Self {
            a2_max: n,
            four_v3_max: n,
            det_max: n,
            expansion_max: d.expansion_max.min(n),
            bracket_max: d.bracket_max.min(n),
            signature_max: d.signature_max.min(n),
            ..d
        }
    }
}

fn corpus(max: i64) -> Result<Vec<ConwayForm>> {
    if max < 2 {
        return Ok(Vec::new());
    }
    enumerate(&EnumerationSpec::new(max))
}

/// Runs `check` on every form; the first failure in enumeration order wins.
fn over_corpus<F>(name: &str, forms: &[ConwayForm], check: F) -> SuiteResult
where
    F: Fn(&ConwayForm) -> Result<Option<String>> + Sync,
{
    let first = forms.par_iter().find_map_first(|k| match check(k) {
        Ok(None) => None,
        Ok(Some(msg)) => Some(format!("{k}: {msg}")),
        Err(e) => Some(format!("{k}: {e}")),
    });
    match first {
        None => SuiteResult::pass(name, forms.len()),
        Some(msg) => SuiteResult::fail(name, forms.len(), msg),
    }
}

fn disagreement<T: PartialEq + std::fmt::Display>(values: &[(&str, T)]) -> Option<String> {
    let (first_name, first) = &values[0];
    values
        .iter()
        .find(|(_, v)| v != first)
        .map(|(n, v)| format!("{first_name} = {first}, {n} = {v}"))
}

/// Matches a genus-2 or genus-3 form against the families with stated closed forms.
fn family_instance(k: &ConwayForm) -> Option<(FamilyId, Vec<i64>)> {
    let e: Vec<i64> = k.entries().iter().map(|v| v.abs() / 2).collect();
    match *e.as_slice() {
        [x, y, z, w] => Some((FamilyId::Genus2General, vec![x, y, z, w])),
        [x, 1, 2, 1, 1, v] => Some((FamilyId::Genus3Y, vec![x, v])),
        [x, 2, 1, 1, 1, v] => Some((FamilyId::Genus3X, vec![x, v])),
        [x, 1, 1, 1, 1, v] => Some((FamilyId::Genus3Final, vec![x, v])),
        _ => None,
    }
}

pub fn a2_suite(max: i64, expansion_max: i64) -> Result<SuiteResult> {
    let forms = corpus(max)?;
    Ok(over_corpus(
        "a2: gauss = conway = expansion = closed form",
        &forms,
        |k| {
            let mut values = vec![("gauss", gauss_forms::a2_gauss(k)), ("conway", seifert::a2(k))];
            if k.complexity() <= expansion_max {
                values.push(("expansion", seifert::conway_polynomial_by_expansion(k)?.coeff(2)));
            }
            if let Some((f, params)) = family_instance(k) {
                let cf = family_closed_form(f, &params)?;
                if !cf.a2.is_integer() {
                    return Ok(Some(format!("{f} closed form a2 = {}", rational_to_string(&cf.a2))));
                }
                values.push((f.name(), cf.a2.to_integer()));
            }
            Ok(disagreement(&values))
        },
    ))
}

pub fn conway_polynomial_suite(max: i64) -> Result<SuiteResult> {
    let forms = corpus(max)?;
    Ok(over_corpus(
        "conway polynomial: continuant = cofactor expansion",
        &forms,
        |k| {
            let (a, b) = (
                seifert::conway_polynomial(k),
                seifert::conway_polynomial_by_expansion(k)?,
            );
            Ok((a != b).then(|| format!("continuant = {}, expansion = {}", a.display_in("z"), b.display_in("z"))))
        },
    ))
}

pub fn four_v3_suite(max: i64) -> Result<SuiteResult> {
    let forms = corpus(max)?;
    let four = Rational::from_integer(4.into());
    let pin = jones::v3_from_jones(&ConwayForm::torus(1))? * &four;
    if pin != Rational::from_integer(1.into()) {
        return Ok(SuiteResult::fail(
            "4v3: gauss = jones",
            0,
            format!("4v3(C[2,-2]) = {} instead of 1", rational_to_string(&pin)),
        ));
    }
    Ok(over_corpus("4v3: gauss = jones", &forms, |k| {
        let v = jones::jones_polynomial(k)?;
        if v.eval_at_one() != BigInt::from(1) {
            return Ok(Some(format!("V(1) = {}", v.eval_at_one())));
        }
        let by_jones = jones::v3_from_polynomial(&v) * &four;
        let by_gauss = Rational::from_integer(gauss_forms::four_v3_gauss(k));
        Ok(disagreement(&[
            ("gauss", rational_to_string(&by_gauss)),
            ("jones", rational_to_string(&by_jones)),
        ]))
    }))
}

/// `|nabla(z)|` at `z^2 = -4`.
fn conway_at_minus_four(k: &ConwayForm) -> BigInt {
    let nabla = seifert::conway_polynomial(k);
    let mut acc = BigInt::from(0);
    for (e, c) in nabla.terms() {
        acc += c * BigInt::from(-4).pow((e / 2) as u32);
    }
    acc.abs()
}

pub fn det_suite(max: i64, strategies: &Strategies) -> Result<SuiteResult> {
    let forms = corpus(max)?;
    Ok(over_corpus(
        "det: recurrence = seifert = alexander = jones",
        &forms,
        |k| {
            let mut values = Vec::new();
            for (name, route) in strategies.det.iter() {
                values.push((name, route.compute(k)?));
            }
            values.push(("conway at z^2=-4", conway_at_minus_four(k)));
            Ok(disagreement(&values))
        },
    ))
}

pub fn positive_definite_suite(max: i64, method: &dyn SignatureMethod) -> Result<SuiteResult> {
    let forms = corpus(max)?;
    Ok(over_corpus("ordinary signature = 2g", &forms, |k| {
        let s = method.lt_signature(k, &Rational::new(1.into(), 2.into()))?;
        Ok((s != 2 * k.genus() as i64).then(|| format!("signature {s}, genus {}", k.genus())))
    }))
}

pub fn signature_methods_suite(
    max: i64,
    p_max: u32,
    reference: &dyn SignatureMethod,
    other: &dyn SignatureMethod,
) -> Result<SuiteResult> {
    let forms = corpus(max)?;
    let name = format!("total signature: {} = {}", reference.name(), other.name());
    let result = over_corpus(&name, &forms, |k| {
        for p in 2..=p_max {
            let (a, b) = (reference.total_signature(k, p)?, other.total_signature(k, p)?);
            if a != b {
                return Ok(Some(format!(
                    "p = {p}: {} = {a}, {} = {b}",
                    reference.name(),
                    other.name()
                )));
            }
        }
        Ok(None)
    });
    Ok(result)
}

/// `sigma(T_{2,2g+1}, p)` from the Seifert form against the torus recursion.
pub fn torus_gate_suite(g_max: u64, p_max: u32, method: &dyn SignatureMethod) -> Result<SuiteResult> {
    let name = "torus signature gate";
    let degenerate = method.total_signature(&ConwayForm::torus(1), 6)?;
    if degenerate != 8 {
        return Ok(SuiteResult::fail(
            name,
            0,
            format!("sigma(T(2,3), 6) = {degenerate}, expected 8"),
        ));
    }
    let mut checked = 1;
    for g in 1..=g_max {
        let k = ConwayForm::torus(g as usize);
        for p in 2..=p_max {
            let seif = method.total_signature(&k, p)?;
            let torus = torus_sig::total_sig_torus_2_odd(g, p as u64);
            checked += 1;
            if seif != torus {
                return Ok(SuiteResult::fail(
                    name,
                    checked,
                    format!("g = {g}, p = {p}: seifert = {seif}, torus recursion = {torus}"),
                ));
            }
        }
    }
    Ok(SuiteResult::pass(name, checked))
}

pub fn bracket_suite(max: i64, strategies: &Strategies) -> Result<SuiteResult> {
    let forms = corpus(max)?;
    let methods: Vec<_> = strategies.bracket.iter().collect();
    Ok(over_corpus("bracket: transfer = state-sum", &forms, |k| {
        let mut values = Vec::new();
        for (name, m) in &methods {
            values.push((*name, m.bracket(k)?.display_in("A")));
        }
        Ok(disagreement(&values))
    }))
}

pub fn torus_bounds_suite(n_max: u64) -> SuiteResult {
    let name = "torus signature bounds";
    let mut checked = 0;
    for n in 1..=n_max {
        for q in 1..=n {
            checked += 1;
            if !torus_sig::check_bounds(q, n) {
                return SuiteResult::fail(
                    name,
                    checked,
                    format!("T({q},{n}): signature {}", torus_sig::sigma_torus(q, n)),
                );
            }
        }
    }
    SuiteResult::pass(name, checked)
}

pub fn density_floor_suite(g_max: u64, p_range: (u64, u64)) -> SuiteResult {
    let name = "torus density floors";
    let mut checked = 0;
    for g in 1..=g_max {
        let floor = torus_sig::density_floor(g);
        for p in p_range.0..=p_range.1 {
            checked += 1;
            let s = torus_sig::total_sig_torus_2_odd(g, p);
            let ratio = Rational::new(s.into(), ((p * g) as i64).into());
            if ratio < floor {
                return SuiteResult::fail(
                    name,
                    checked,
                    format!(
                        "g = {g}, p = {p}: sigma/(pg) = {} < {}",
                        rational_to_string(&ratio),
                        rational_to_string(&floor)
                    ),
                );
            }
        }
    }
    SuiteResult::pass(name, checked)
}

/// Parameter tuples for a family, each entry in `1..=grid`
/// (`g >= 2` for the two-parameter genus family).
pub fn family_grid(f: FamilyId, grid: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for slot in 0..f.arity() {
        let lo = if f == FamilyId::Genus4TwoParam && slot == 0 {
            2
        } else {
            1
        };
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=grid).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn family_suite(grid: i64) -> Result<SuiteResult> {
    let name = "family closed forms";
    let mut checked = 0;
    for f in FamilyId::ALL {
        for params in family_grid(f, grid) {
            checked += 1;
            let check = family_check(f, &params)?;
            if let Some(d) = check.discrepancies.iter().find(|d| !d.known_typo) {
                return Ok(SuiteResult::fail(
                    name,
                    checked,
                    format!(
                        "{f}{params:?} = {}: {:?} stated {}, engine {}",
                        check.form,
                        d.field,
                        rational_to_string(&d.stated),
                        rational_to_string(&d.engine)
                    ),
                ));
            }
        }
    }
    Ok(SuiteResult::pass(name, checked))
}

/// Every suite at the sizes in `cfg`.
pub fn oracle_check(cfg: &OracleConfig, strategies: &Strategies, sel: &Selection) -> Result<RunReport> {
    let start = Instant::now();
    strategies.validate(sel)?;
    let reference = strategies.signature.get(&sel.signature)?;
    let mut suites = vec![
        a2_suite(cfg.a2_max, cfg.expansion_max)?,
        conway_polynomial_suite(cfg.expansion_max)?,
        four_v3_suite(cfg.four_v3_max)?,
        det_suite(cfg.det_max, strategies)?,
        positive_definite_suite(cfg.signature_max, reference)?,
    ];
    for (name, other) in strategies.signature.iter() {
        if name != sel.signature {
            suites.push(signature_methods_suite(
                cfg.signature_max,
                cfg.signature_p_max,
                reference,
                other,
            )?);
        }
    }
    suites.push(torus_gate_suite(cfg.torus_gate_g, cfg.torus_gate_p, reference)?);
    suites.push(bracket_suite(cfg.bracket_max, strategies)?);
    suites.push(torus_bounds_suite(cfg.bounds_n));
    suites.push(density_floor_suite(cfg.density_g, cfg.density_p));
    suites.push(family_suite(cfg.family_grid)?);

    let mut report = RunReport::new("oracle-check", None, sel.clone());
    report.suites = suites;
    report.wall_time = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conway::parse;

    #[test]
    fn family_matching() {
        let k = parse("6,-2,4,-2,2,-4").unwrap();
        assert_eq!(family_instance(&k), Some((FamilyId::Genus3Y, vec![3, 2])));
        assert_eq!(family_instance(&parse("2,-2").unwrap()), None);
    }

    #[test]
    fn grids() {
        assert_eq!(family_grid(FamilyId::Genus2B, 3), vec![vec![1], vec![2], vec![3]]);
        assert_eq!(family_grid(FamilyId::Genus4TwoParam, 3).len(), 2 * 3 * 3);
        assert_eq!(family_grid(FamilyId::Genus2General, 2).len(), 16);
    }

    #[test]
    fn conway_at_z_squared_minus_four() {
        assert_eq!(conway_at_minus_four(&parse("4,-2,2,-4").unwrap()), BigInt::from(33));
    }

    #[test]
    fn small_run_passes() {
        let cfg = OracleConfig {
            bounds_n: 20,
            density_p: (11, 20),
            family_grid: 3,
            ..OracleConfig::with_max_complexity(6)
        };
        let report = oracle_check(&cfg, &Strategies::builtin(), &Selection::default()).unwrap();
        assert!(report.suites_passed(), "{:#?}", report.suites);
        assert!(report.suites.len() >= 11);
    }

    #[test]
    fn failures_name_both_values() {
        let forms = corpus(4).unwrap();
        let r = over_corpus("demo", &forms, |k| {
            Ok(disagreement(&[("left", k.genus()), ("right", 1)]))
        });
        assert!(!r.passed);
        assert_eq!(r.failure.as_deref(), Some("C[2,-2,2,-2]: left = 2, right = 1"));
    }
}
