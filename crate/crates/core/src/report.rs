//! Machine-readable reports and CSV/JSON output.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::walks::SpectrumReport;

pub const REPORT_FORMAT_VERSION: &str = "hdx-report/1";

/// How `computed` must relate to `expected`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `|computed - expected| <= tolerance`
    Eq,
    /// `computed >= expected - tolerance`
    Ge,
    /// `computed <= expected + tolerance`
    Le,
    /// `computed > expected`
    Gt,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub check_id: String,
    /// The formula the check instantiates.
    pub paper_anchor: String,
    pub relation: Relation,
    pub expected: f64,
    pub computed: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(
        check_id: impl Into<String>,
        anchor: impl Into<String>,
        relation: Relation,
        expected: f64,
        computed: f64,
        tolerance: f64,
    ) -> Self {
        let pass = match relation {
            Relation::Eq => (computed - expected).abs() <= tolerance,
            Relation::Ge => computed >= expected - tolerance,
            Relation::Le => computed <= expected + tolerance,
            Relation::Gt => computed > expected,
        };
        Check {
            check_id: check_id.into(),
            paper_anchor: anchor.into(),
            relation,
            expected,
            computed,
            tolerance,
            pass,
            skipped: None,
            detail: None,
        }
    }

    /// An exact check recorded as a count of violations.
    pub fn exact(check_id: impl Into<String>, anchor: impl Into<String>, violations: usize) -> Self {
        Check::new(check_id, anchor, Relation::Eq, 0.0, violations as f64, 0.0)
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    /// Keeps the computed value but removes the check from the verdict.
    pub fn skip(mut self, reason: impl Into<String>) -> Self {
        self.skipped = Some(reason.into());
        self
    }

    pub fn counts(&self) -> bool {
        self.skipped.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub format_version: String,
    pub config: serde_json::Value,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(default)]
    pub extras: serde_json::Value,
}

impl VerificationReport {
    pub fn new(checks: Vec<Check>) -> Self {
        let pass = checks.iter().filter(|c| c.counts()).all(|c| c.pass);
        VerificationReport {
            format_version: REPORT_FORMAT_VERSION.to_string(),
            config: serde_json::Value::Null,
            checks,
            pass,
            extras: serde_json::Value::Null,
        }
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.check_id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.counts() && !c.pass)
    }
}

/// 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn spectrum_csv(reports: &[SpectrumReport]) -> String {
    let mut out = String::from("level,walk,i,eigenvalue\n");
    for r in reports {
        for (i, x) in r.eigenvalues.iter().enumerate() {
            out.push_str(&format!("{},{},{},{}\n", r.level, r.walk, i + 1, format_float(*x)));
        }
    }
    out
}

pub fn tv_csv(trace: &[f64]) -> String {
    let mut out = String::from("step,tv\n");
    for (step, tv) in trace.iter().enumerate() {
        out.push_str(&format!("{step},{}\n", format_float(*tv)));
    }
    out
}

/// Writes via a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
