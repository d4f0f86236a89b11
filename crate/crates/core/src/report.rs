//! Suite reports: JSON (schema-versioned, key-sorted) and plain-text tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::lattice::Point;

pub const REPORT_SCHEMA: u32 = 1;
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Fitted multiplicativity signs: convention name, then `"left/right"` parity
/// pair, then `+1`, `-1` or `null`.
pub type SignTables = BTreeMap<String, BTreeMap<String, Option<i8>>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub name: String,
    pub passed: bool,
    /// Seed, random stream and enumeration order that produced the inputs.
    pub inputs: String,
    pub residual: Option<f64>,
    pub witness: Option<Point>,
    pub sign_table: Option<SignTables>,
    /// Only filled when timings are requested, so default reports stay
    /// byte-reproducible.
    pub elapsed_ms: Option<f64>,
    pub detail: String,
    pub error: Option<String>,
    #[serde(default)]
    pub resource_cap: bool,
}

impl Record {
    pub fn new(name: &str, inputs: String) -> Self {
        Self {
            name: name.to_string(),
            passed: false,
            inputs,
            residual: None,
            witness: None,
            sign_table: None,
            elapsed_ms: None,
            detail: String::new(),
            error: None,
            resource_cap: false,
        }
    }

    pub fn failed_with(mut self, err: &Error) -> Self {
        self.passed = false;
        self.resource_cap = err.is_resource_cap();
        self.error = Some(err.to_string());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "vacuous pass")]
    VacuousPass,
    #[serde(rename = "resource cap")]
    ResourceCap,
}

impl Verdict {
    pub fn from_records(records: &[Record]) -> Self {
        if records.is_empty() {
            Self::VacuousPass
        } else if records.iter().any(|r| !r.passed && !r.resource_cap) {
            Self::Fail
        } else if records.iter().any(|r| r.resource_cap) {
            Self::ResourceCap
        } else {
            Self::Pass
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::VacuousPass => "vacuous pass",
            Self::ResourceCap => "resource cap",
        }
    }

    /// 0 pass, 1 check failure, 3 resource cap. Code 2 is reserved for
    /// configuration errors, which never produce a report.
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Pass | Self::VacuousPass => 0,
            Self::Fail => 1,
            Self::ResourceCap => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VersionInfo {
    pub artifact: String,
    pub schema: u32,
}

impl Default for VersionInfo {
    fn default() -> Self {
        Self {
            artifact: ARTIFACT_VERSION.to_string(),
            schema: REPORT_SCHEMA,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: VersionInfo,
    pub config: ExperimentConfig,
    pub records: Vec<Record>,
    pub verdict: Verdict,
}

impl Report {
    pub fn new(config: ExperimentConfig, records: Vec<Record>) -> Self {
        let verdict = Verdict::from_records(&records);
        Self {
            version: VersionInfo::default(),
            config,
            records,
            verdict,
        }
    }

    pub fn record(&self, name: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.name == name)
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: Report = serde_json::from_str(text).map_err(|e| {
            Error::Config(format!(
                "report line {} column {}: {e}",
                e.line(),
                e.column()
            ))
        })?;
        if report.version.schema != REPORT_SCHEMA {
            return Err(Error::Config(format!(
                "unsupported report schema {}",
                report.version.schema
            )));
        }
        Ok(report)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Serializes through `serde_json::Value`, whose maps are ordered, so keys
/// come out sorted at every level.
pub fn to_sorted_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report values serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}

pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => to_sorted_json(report).into_bytes(),
        Format::Text => render_text(report).into_bytes(),
    }
}

fn sign_cell(s: Option<i8>) -> &'static str {
    match s {
        Some(1) => "+1",
        Some(-1) => "-1",
        _ => "none",
    }
}

/// The sign tables as rows of parity pairs against convention columns.
pub fn render_sign_tables(tables: &SignTables) -> String {
    let mut out = String::new();
    let conventions: Vec<&String> = tables.keys().collect();
    let _ = write!(out, "    {:<10}", "parity");
    for c in &conventions {
        let _ = write!(out, " {c:>8}");
    }
    out.push('\n');
    for pair in ["even/even", "even/odd", "odd/even", "odd/odd"] {
        let _ = write!(out, "    {pair:<10}");
        for c in &conventions {
            let cell = sign_cell(tables[*c].get(pair).copied().flatten());
            let _ = write!(out, " {cell:>8}");
        }
        out.push('\n');
    }
    out
}

fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let name = if report.config.name.is_empty() {
        "(unnamed)"
    } else {
        &report.config.name
    };
    let _ = writeln!(
        out,
        "carflow {} report (schema {})",
        report.version.artifact, report.version.schema
    );
    let _ = writeln!(out, "config: {name}, seed {}", report.config.seed);
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:<24} {:<6} {:>12} {:>10}  detail",
        "check", "result", "residual", "ms"
    );
    for r in &report.records {
        let result = if r.passed {
            "pass"
        } else if r.resource_cap {
            "cap"
        } else {
            "FAIL"
        };
        let residual = r.residual.map_or("-".to_string(), |x| format!("{x:.3e}"));
        let ms = r.elapsed_ms.map_or("-".to_string(), |x| format!("{x:.1}"));
        let mut detail = r.detail.clone();
        if let Some(w) = &r.witness {
            detail = format!("witness {w}; {detail}");
        }
        if let Some(e) = &r.error {
            detail = format!("error: {e}");
        }
        let _ = writeln!(
            out,
            "{:<24} {:<6} {:>12} {:>10}  {}",
            r.name, result, residual, ms, detail
        );
        if let Some(t) = &r.sign_table {
            out.push_str(&render_sign_tables(t));
        }
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "verdict: {}", report.verdict.as_str());
    out
}
