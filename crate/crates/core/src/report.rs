//! Test records, verification reports and their JSON, CSV and text renderings.

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::hilbert::NormRow;
use crate::C64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Where a reference value comes from: a stated theorem or formula, a forced value, or an
/// independently computed oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Theorem,
    Trivial,
    Derived,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Theorem => "theorem",
            Provenance::Trivial => "trivial",
            Provenance::Derived => "derived",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestRecord {
    pub suite: String,
    pub name: String,
    pub params: serde_json::Value,
    pub value_re: Option<f64>,
    pub value_im: Option<f64>,
    pub ref_re: Option<f64>,
    pub ref_im: Option<f64>,
    pub provenance: Provenance,
    /// `None` when the computation itself failed.
    pub abs_err: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl TestRecord {
    fn base(suite: &str, name: &str, params: serde_json::Value, provenance: Provenance, tolerance: f64) -> Self {
        Self {
            suite: suite.into(),
            name: name.into(),
            params,
            value_re: None,
            value_im: None,
            ref_re: None,
            ref_im: None,
            provenance,
            abs_err: None,
            tolerance,
            pass: false,
            error: None,
            runtime_ms: None,
        }
    }

    /// `|value - reference| <= tolerance`.
    pub fn compare(suite: &str, name: &str, params: serde_json::Value, value: C64, reference: C64, provenance: Provenance, tolerance: f64) -> Self {
        let err = (value - reference).norm();
        Self {
            value_re: finite(value.re),
            value_im: finite(value.im),
            ref_re: finite(reference.re),
            ref_im: finite(reference.im),
            abs_err: finite(err),
            pass: err <= tolerance,
            ..Self::base(suite, name, params, provenance, tolerance)
        }
    }

    /// A residual that should vanish.
    pub fn residual(suite: &str, name: &str, params: serde_json::Value, residual: f64, provenance: Provenance, tolerance: f64) -> Self {
        Self::compare(suite, name, params, C64::new(residual, 0.0), C64::new(0.0, 0.0), provenance, tolerance)
    }

    /// A quantity that must be strictly positive; the error is its shortfall below zero.
    pub fn positive(suite: &str, name: &str, params: serde_json::Value, value: f64, provenance: Provenance) -> Self {
        let err = (-value).max(0.0);
        Self {
            value_re: finite(value),
            value_im: Some(0.0),
            ref_re: Some(0.0),
            ref_im: Some(0.0),
            abs_err: finite(err),
            pass: value > 0.0 && value.is_finite(),
            ..Self::base(suite, name, params, provenance, 0.0)
        }
    }

    pub fn failed(suite: &str, name: &str, params: serde_json::Value, provenance: Provenance, tolerance: f64, error: &Error) -> Self {
        Self { error: Some(error.to_string()), ..Self::base(suite, name, params, provenance, tolerance) }
    }

    /// Turns a fallible computation into a record; numeric failures become failed records.
    pub fn from_result(
        suite: &str,
        name: &str,
        params: serde_json::Value,
        provenance: Provenance,
        tolerance: f64,
        r: Result<Self>,
    ) -> Self {
        r.unwrap_or_else(|e| Self::failed(suite, name, params, provenance, tolerance, &e))
    }

    fn severity(&self) -> f64 {
        match self.abs_err {
            _ if !self.pass && self.abs_err.is_none() => f64::INFINITY,
            Some(e) if self.tolerance > 0.0 => e / self.tolerance,
            Some(e) => e,
            None => f64::INFINITY,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub version: String,
    pub summary: Summary,
    pub config: RunConfig,
    pub records: Vec<TestRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_table: Option<Vec<NormRow>>,
    /// Fitted growth constants per suite run, when available.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub fits: BTreeMap<String, serde_json::Value>,
}

impl VerificationReport {
    pub fn new(suite: &str, config: &RunConfig) -> Self {
        Self {
            suite: suite.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            summary: Summary::default(),
            config: config.clone(),
            records: Vec::new(),
            norm_table: None,
            fits: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, r: TestRecord) {
        self.records.push(r);
        self.recount();
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.records.extend(other.records);
        if other.norm_table.is_some() {
            self.norm_table = other.norm_table;
        }
        self.fits.extend(other.fits);
        self.recount();
    }

    fn recount(&mut self) {
        let passed = self.records.iter().filter(|r| r.pass).count();
        self.summary = Summary { total: self.records.len(), passed, failed: self.records.len() - passed };
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn strip_runtimes(&mut self) {
        for r in &mut self.records {
            r.runtime_ms = None;
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(["suite", "test", "param_json", "value_re", "value_im", "ref_re", "ref_im", "provenance", "abs_err", "pass"]).map_err(io)?;
        let num = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
        for r in &self.records {
            w.write_record([
                r.suite.clone(),
                r.name.clone(),
                r.params.to_string(),
                num(r.value_re),
                num(r.value_im),
                num(r.ref_re),
                num(r.ref_im),
                r.provenance.as_str().to_string(),
                num(r.abs_err),
                r.pass.to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// One block per suite, ordered by first appearance, each sorted worst error first.
    pub fn to_text(&self) -> String {
        let mut order: Vec<&str> = Vec::new();
        for r in &self.records {
            if !order.contains(&r.suite.as_str()) {
                order.push(&r.suite);
            }
        }
        let mut out = String::new();
        let _ = writeln!(out, "report {}  passed {}/{}", self.suite, self.summary.passed, self.summary.total);
        for suite in order {
            let mut rows: Vec<&TestRecord> = self.records.iter().filter(|r| r.suite == suite).collect();
            rows.sort_by(|a, b| b.severity().total_cmp(&a.severity()));
            let failed = rows.iter().filter(|r| !r.pass).count();
            let _ = writeln!(out, "\n[{suite}] {} tests, {failed} failed", rows.len());
            let _ = writeln!(out, "  {:<4} {:<44} {:>11} {:>9} {:<8} params", "", "test", "abs_err", "tol", "source");
            for r in rows {
                let err = r.abs_err.map(|e| format!("{e:.3e}")).unwrap_or_else(|| "-".into());
                let _ = writeln!(
                    out,
                    "  {:<4} {:<44} {:>11} {:>9.1e} {:<8} {}{}",
                    if r.pass { "ok" } else { "FAIL" },
                    r.name,
                    err,
                    r.tolerance,
                    r.provenance.as_str(),
                    r.params,
                    r.error.as_deref().map(|e| format!("  ({e})")).unwrap_or_default()
                );
            }
        }
        out
    }

    pub fn norm_table_csv(&self) -> Option<String> {
        let rows = self.norm_table.as_ref()?;
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["tau_re", "tau_im", "sigma_re", "sigma_im", "spin", "row", "column", "norm_squared", "dim_times_norm_squared", "refinement_change"]).ok()?;
        for r in rows {
            w.serialize((r.tau[0], r.tau[1], r.sigma[0], r.sigma[1], r.twice_spin as f64 / 2.0, r.row, r.column, r.norm_squared, r.times_dim, r.estimate)).ok()?;
        }
        String::from_utf8(w.into_inner().ok()?).ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "txt",
        }
    }
}

impl VerificationReport {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => Ok(self.to_text()),
        }
    }

    /// Writes `report.<ext>` (and `norm_table.csv` when present) into `dir`; returns the report path.
    pub fn write(&self, dir: &Path, format: Format) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(format!("report.{}", format.extension()));
        std::fs::write(&path, self.render(format)?)?;
        if let Some(table) = self.norm_table_csv() {
            std::fs::write(dir.join("norm_table.csv"), table)?;
        }
        Ok(path)
    }
}
