//! Run reports and their JSON/CSV persistence.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::rational_to_string;
use crate::obstruction::{ObstructionReport, Verdict};
use crate::registry::Selection;

use super::enumerate::EnumerationSpec;

/// Outcome of one cross-check suite or one replayed case list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub checked: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl SuiteResult {
    pub fn pass(name: impl Into<String>, checked: usize) -> Self {
        Self {
            name: name.into(),
            checked,
            passed: true,
            failure: None,
        }
    }

    pub fn fail(name: impl Into<String>, checked: usize, failure: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            checked,
            passed: false,
            failure: Some(failure.into()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub run: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<EnumerationSpec>,
    pub selection: Selection,
    pub counts: BTreeMap<Verdict, usize>,
    pub reports: Vec<ObstructionReport>,
    pub suites: Vec<SuiteResult>,
    /// Not serialized, so reports of equal runs are byte-identical.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl RunReport {
    pub fn new(run: impl Into<String>, spec: Option<EnumerationSpec>, selection: Selection) -> Self {
        Self {
            run: run.into(),
            spec,
            selection,
            counts: BTreeMap::new(),
            reports: Vec::new(),
            suites: Vec::new(),
            wall_time: Duration::ZERO,
        }
    }

    /// Replaces the report list and recounts verdicts.
    pub fn set_reports(&mut self, reports: Vec<ObstructionReport>) {
        self.counts.clear();
        for r in &reports {
            *self.counts.entry(r.verdict).or_default() += 1;
        }
        self.reports = reports;
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.counts.get(&v).copied().unwrap_or(0)
    }

    pub fn inconclusive(&self) -> Vec<&ObstructionReport> {
        self.reports
            .iter()
            .filter(|r| r.verdict == Verdict::Inconclusive)
            .collect()
    }

    pub fn suites_passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }

    /// Counts add up, no inconclusive verdict, every suite passed.
    pub fn check(&self) -> Result<()> {
        let total: usize = self.counts.values().sum();
        if total != self.reports.len() {
            return Err(Error::Internal(format!(
                "verdict counts sum to {total} but there are {} reports",
                self.reports.len()
            )));
        }
        if let Some(r) = self.inconclusive().first() {
            return Err(Error::Internal(format!("inconclusive verdict for {}", r.key)));
        }
        if let Some(s) = self.suites.iter().find(|s| !s.passed) {
            return Err(Error::Internal(format!(
                "{} failed: {}",
                s.name,
                s.failure.as_deref().unwrap_or("no detail")
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Internal(e.to_string()))
    }

    pub fn write_json(&self, w: impl Write) -> Result<()> {
        serde_json::to_writer_pretty(w, self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Io(e.to_string());
        out.write_record(CSV_COLUMNS).map_err(io)?;
        for r in &self.reports {
            out.write_record([
                r.key.clone(),
                r.g.to_string(),
                r.det.to_string(),
                r.a2.to_string(),
                r.a4.to_string(),
                r.four_v3.to_string(),
                rational_to_string(&r.slope_lmo),
                rational_to_string(&r.slope_hf),
                r.main_ineq.to_string(),
                r.equality_violated.to_string(),
                r.verdict.to_string(),
            ])
            .map_err(io)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Writes JSON or CSV depending on the file extension.
    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::io::BufWriter::new(std::fs::File::create(path)?);
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => self.write_json(file),
            Some("csv") => self.write_csv(file),
            _ => Err(Error::Precondition(format!(
                "output must end in .json or .csv: {}",
                path.display()
            ))),
        }
    }
}

pub const CSV_COLUMNS: [&str; 11] = [
    "key",
    "g",
    "det",
    "a2",
    "a4",
    "four_v3",
    "slope_lmo",
    "slope_hf",
    "main_ineq",
    "equality_violated",
    "verdict",
];
