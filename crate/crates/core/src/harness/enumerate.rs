//! Exhaustive enumeration of positive Conway forms by complexity.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conway::ConwayForm;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dedup {
    #[default]
    None,
    /// Keep one form from each pair `{k, mirror_symmetry(k)}`.
    Symmetry,
}

impl std::str::FromStr for Dedup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Dedup::None),
            "symmetry" => Ok(Dedup::Symmetry),
            other => Err(Error::UnknownStrategy {
                kind: "dedup mode",
                name: other.to_string(),
                available: "none, symmetry".into(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationSpec {
    /// Upper bound on `s(K) = sum (b_i - c_i)`.
    pub max_complexity: i64,
    #[serde(default)]
    pub genus_range: Option<(usize, usize)>,
    #[serde(default)]
    pub dedup: Dedup,
}

impl EnumerationSpec {
    pub fn new(max_complexity: i64) -> Self {
        Self {
            max_complexity,
            genus_range: None,
            dedup: Dedup::None,
        }
    }

    pub fn with_dedup(mut self, dedup: Dedup) -> Self {
        self.dedup = dedup;
        self
    }

    pub fn with_genus_range(mut self, g_min: usize, g_max: usize) -> Self {
        self.genus_range = Some((g_min, g_max));
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_complexity < 2 {
            return Err(Error::Precondition(format!(
                "max_complexity must be at least 2, got {}",
                self.max_complexity
            )));
        }
        if let Some((lo, hi)) = self.genus_range {
            if lo < 1 || lo > hi {
                return Err(Error::Precondition(format!("bad genus range {lo}..={hi}")));
            }
        }
        Ok(())
    }

    fn genus_allowed(&self, g: usize) -> bool {
        self.genus_range.is_none_or(|(lo, hi)| lo <= g && g <= hi)
    }

    /// `(s, g)` blocks covered by the spec.
    fn blocks(&self) -> Vec<(i64, usize)> {
        let mut out = Vec::new();
        for m in 2..=self.max_complexity {
            for g in 1..=(m as usize / 2) {
                if self.genus_allowed(g) {
                    out.push((m, g));
                }
            }
        }
        out
    }
}

/// `binomial(m - 1, 2g - 1)`: compositions of `m` into `2g` positive parts.
pub fn expected_count(m: i64, g: usize) -> BigInt {
    let n = m - 1;
    let k = 2 * g as i64 - 1;
    if k < 0 || k > n {
        return BigInt::from(0);
    }
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Every form with `s(K) = m` and genus `g`, in lexicographic order of the
/// bracket entries.
pub fn forms_with(m: i64, g: usize) -> Vec<ConwayForm> {
    let parts = 2 * g;
    let mut out = Vec::new();
    let mut comp = Vec::with_capacity(parts);
    compositions(m, parts, &mut comp, &mut out);
    out.sort();
    out
}

fn compositions(left: i64, parts: usize, comp: &mut Vec<i64>, out: &mut Vec<ConwayForm>) {
    if parts == 0 {
        if left == 0 {
            let entries: Vec<i64> = comp
                .iter()
                .enumerate()
                .map(|(pos, &v)| if pos % 2 == 0 { 2 * v } else { -2 * v })
                .collect();
            out.push(ConwayForm::from_entries(&entries).expect("composition is a valid form"));
        }
        return;
    }
    let max = left - (parts as i64 - 1);
    for v in 1..=max {
        comp.push(v);
        compositions(left - v, parts - 1, comp, out);
        comp.pop();
    }
}

fn apply_dedup(forms: Vec<ConwayForm>, dedup: Dedup) -> Vec<ConwayForm> {
    match dedup {
        Dedup::None => forms,
        Dedup::Symmetry => forms.into_iter().filter(ConwayForm::is_canonical).collect(),
    }
}

/// All forms admitted by `spec`, sorted by complexity, genus, then entries.
pub fn enumerate(spec: &EnumerationSpec) -> Result<Vec<ConwayForm>> {
    spec.validate()?;
    let mut out = Vec::new();
    for (m, g) in spec.blocks() {
        out.extend(apply_dedup(forms_with(m, g), spec.dedup));
    }
    Ok(out)
}

/// Same output as [`enumerate`], with blocks generated in parallel.
pub fn enumerate_par(spec: &EnumerationSpec) -> Result<Vec<ConwayForm>> {
    spec.validate()?;
    let blocks: Vec<Vec<ConwayForm>> = spec
        .blocks()
        .into_par_iter()
        .map(|(m, g)| apply_dedup(forms_with(m, g), spec.dedup))
        .collect();
    Ok(blocks.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conway::parse;

    #[test]
    fn small_blocks() {
        assert_eq!(forms_with(5, 2).len(), 4);
        assert_eq!(forms_with(2, 1), vec![parse("2,-2").unwrap()]);
        let three = forms_with(3, 1);
        assert_eq!(three, vec![parse("2,-4").unwrap(), parse("4,-2").unwrap()]);
        let spec = EnumerationSpec::new(3)
            .with_dedup(Dedup::Symmetry)
            .with_genus_range(1, 1);
        let forms = enumerate(&spec).unwrap();
        assert_eq!(forms.len(), 2);
        assert_eq!(forms.iter().filter(|k| k.complexity() == 3).count(), 1);
    }

    #[test]
    fn counts_match_binomials() {
        for m in 2..=12 {
            for g in 1..=(m as usize / 2) {
                assert_eq!(
                    BigInt::from(forms_with(m, g).len()),
                    expected_count(m, g),
                    "m={m} g={g}"
                );
            }
        }
        assert_eq!(expected_count(5, 2), BigInt::from(4));
        assert_eq!(expected_count(3, 2), BigInt::from(0));
    }

    #[test]
    fn symmetry_dedup_keeps_one_of_each_pair() {
        let all = enumerate(&EnumerationSpec::new(9)).unwrap();
        let dedup = enumerate(&EnumerationSpec::new(9).with_dedup(Dedup::Symmetry)).unwrap();
        let fixed = all.iter().filter(|k| k.mirror_symmetry() == **k).count();
        assert_eq!(2 * dedup.len() - fixed, all.len());
        for k in &all {
            let hits = dedup.iter().filter(|d| **d == *k || **d == k.mirror_symmetry()).count();
            assert_eq!(hits, 1, "{k}");
        }
    }

    #[test]
    fn sorted_unique_and_parallel_equal() {
        let spec = EnumerationSpec::new(11);
        let serial = enumerate(&spec).unwrap();
        assert!(serial.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(enumerate_par(&spec).unwrap(), serial);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(enumerate(&EnumerationSpec::new(1)).is_err());
        assert!(enumerate(&EnumerationSpec::new(5).with_genus_range(3, 2)).is_err());
        assert!("mirror".parse::<Dedup>().is_err());
    }
}
