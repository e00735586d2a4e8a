//! Machine-readable run reports.

use serde::Serialize;
use serde_json::Value as Json;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Versions {
    pub dil: &'static str,
    pub report_schema: u32,
    pub index_schema: u32,
}

impl Default for Versions {
    fn default() -> Self {
        Self {
            dil: env!("CARGO_PKG_VERSION"),
            report_schema: REPORT_SCHEMA_VERSION,
            index_schema: crate::spectral::index::SCHEMA_VERSION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timings {
    pub total_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub subcommand: String,
    pub status: Status,
    pub exit_code: i32,
    pub config: Json,
    pub versions: Versions,
    pub serial: bool,
    pub results: Json,
    pub checks: Vec<Check>,
    pub error: Option<String>,
    /// Omitted (null) in serial runs so those reports are reproducible.
    pub timings: Option<Timings>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
