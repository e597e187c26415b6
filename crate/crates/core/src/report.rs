//! Pass/fail records for measured identities, with JSON and CSV encodings.

use serde::{Deserialize, Serialize};

use crate::quadrature::QuadratureConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub identity: String,
    pub paper_location: String,
    pub defect: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl ReportEntry {
    /// Non-finite defects never pass.
    pub fn new(
        identity: impl Into<String>,
        location: impl Into<String>,
        defect: f64,
        tolerance: f64,
    ) -> Self {
        let defect = if defect.is_nan() {
            f64::INFINITY
        } else {
            defect.abs()
        };
        Self {
            identity: identity.into(),
            paper_location: location.into(),
            defect,
            tolerance,
            passed: defect <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub quadrature: QuadratureConfig,
    pub entries: Vec<ReportEntry>,
    pub overall_passed: bool,
}

impl VerificationReport {
    /// Entries are sorted by identity name so output order is deterministic.
    pub fn new(quadrature: QuadratureConfig, mut entries: Vec<ReportEntry>) -> Self {
        entries.sort_by(|a, b| a.identity.cmp(&b.identity));
        let overall_passed = entries.iter().all(|e| e.passed);
        Self {
            quadrature,
            entries,
            overall_passed,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Header `identity,paper_location,defect,tolerance,passed`, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        for entry in &self.entries {
            writer.serialize(entry).expect("in-memory csv write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory csv flush"))
            .expect("csv output is utf-8")
    }
}
