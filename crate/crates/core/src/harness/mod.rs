//! Enumeration, replay of the named cases, oracle suites and run reports.

mod enumerate;
mod oracle;
mod report;
mod verify;

pub use enumerate::{enumerate, enumerate_par, expected_count, forms_with, Dedup, EnumerationSpec};
pub use oracle::{
    a2_suite, bracket_suite, conway_polynomial_suite, density_floor_suite, det_suite, family_grid, family_suite,
    four_v3_suite, oracle_check, positive_definite_suite, signature_methods_suite, torus_bounds_suite,
    torus_gate_suite, OracleConfig,
};
pub use report::{RunReport, SuiteResult, CSV_COLUMNS};
pub use verify::{known_main_ties, verify_paper, GridConfig};

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::obstruction::report_from_invariants;
use crate::registry::{Selection, Strategies};

/// Contents of a TOML config file: strategy names plus grid and corpus sizes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub strategies: Selection,
    pub grid: GridConfig,
    pub oracle: OracleConfig,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }
}

/// Obstruction reports for every enumerated form, in enumeration order.
pub fn run_enumeration(
    spec: &EnumerationSpec,
    strategies: &Strategies,
    sel: &Selection,
    parallel: bool,
) -> Result<RunReport> {
    let start = Instant::now();
    strategies.validate(sel)?;
    let chain = strategies.obstruction_chain(sel)?;
    let one = |k| report_from_invariants(k, &strategies.invariants(sel, k)?, &chain);
    let reports = if parallel {
        let forms = enumerate_par(spec)?;
        forms.par_iter().map(one).collect::<Result<Vec<_>>>()?
    } else {
        let forms = enumerate(spec)?;
        forms.iter().map(one).collect::<Result<Vec<_>>>()?
    };
    let mut report = RunReport::new("enumerate", Some(spec.clone()), sel.clone());
    report.set_reports(reports);
    report.wall_time = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::obstruction::Verdict;

    #[test]
    fn parallel_matches_serial_byte_for_byte() {
        let spec = EnumerationSpec::new(9).with_dedup(Dedup::Symmetry);
        let (s, sel) = (Strategies::builtin(), Selection::default());
        let a = run_enumeration(&spec, &s, &sel, false).unwrap();
        let b = run_enumeration(&spec, &s, &sel, true).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        let (mut ca, mut cb) = (Vec::new(), Vec::new());
        a.write_csv(&mut ca).unwrap();
        b.write_csv(&mut cb).unwrap();
        assert_eq!(ca, cb);
        a.check().unwrap();
        assert_eq!(a.count(Verdict::Inconclusive), 0);
    }

    #[test]
    fn config_file() {
        let cfg =
            RunConfig::from_toml("[strategies]\nfour_v3 = \"jones\"\n[grid]\ngenus3_max = 4\n[oracle]\ndet_max = 8\n")
                .unwrap();
        assert_eq!(cfg.strategies.four_v3, "jones");
        assert_eq!(cfg.strategies.det, "recurrence");
        assert_eq!(cfg.grid.genus3_max, 4);
        assert_eq!(cfg.oracle.det_max, 8);
        assert!(RunConfig::from_toml("[extra]\nx = 1").is_err());
    }

    #[test]
    fn csv_layout() {
        let spec = EnumerationSpec::new(4).with_genus_range(2, 2);
        let r = run_enumeration(&spec, &Strategies::builtin(), &Selection::default(), false).unwrap();
        let mut out = Vec::new();
        r.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        assert_eq!(
            lines.next().unwrap(),
            "\"g=2;b=1,1;c=-1,-1\",2,5,3,1,5,5,3,false,true,excluded_torus_2k"
        );
        assert_eq!(lines.next(), None);
    }
}
