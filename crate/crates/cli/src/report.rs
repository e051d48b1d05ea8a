//! Report envelope and rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use torsionlab_core::{Status, ENGINE_VERSION};

/// Bumped whenever a field is added, removed or changes meaning.
pub const SCHEMA: &str = "torsionlab-report/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub engine_version: String,
    pub check_id: String,
    pub params: BTreeMap<String, u64>,
    pub status: Status,
    pub witness: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    /// `null` unless timing was requested, so that reports stay byte-identical.
    pub elapsed_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relations: Option<Value>,
}

impl VerificationReport {
    pub fn new(check_id: &str, params: BTreeMap<String, u64>, status: Status, witness: Value) -> Self {
        VerificationReport {
            schema: SCHEMA.into(),
            engine_version: ENGINE_VERSION.into(),
            check_id: check_id.into(),
            params,
            status,
            witness,
            counterexample: None,
            elapsed_ms: None,
            relations: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub hypothesis_not_met: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSet {
    pub schema: String,
    pub engine_version: String,
    pub summary: Summary,
    pub reports: Vec<VerificationReport>,
}

impl ReportSet {
    pub fn new(reports: Vec<VerificationReport>) -> Self {
        let mut summary = Summary {
            total: reports.len(),
            ..Summary::default()
        };
        for r in &reports {
            match r.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::HypothesisNotMet => summary.hypothesis_not_met += 1,
                Status::Skipped => summary.skipped += 1,
            }
        }
        ReportSet {
            schema: SCHEMA.into(),
            engine_version: ENGINE_VERSION.into(),
            summary,
            reports,
        }
    }

    pub fn any_fail(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            let params = r
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" ");
            let _ = write!(out, "{:<18} {:<20} {}", r.status.as_str(), r.check_id, params);
            if let Some(ms) = r.elapsed_ms {
                let _ = write!(out, "  ({ms} ms)");
            }
            out.push('\n');
            if let Some(reason) = r.witness.get("reason").and_then(Value::as_str) {
                let _ = writeln!(out, "    reason: {reason}");
            }
            if let Some(ce) = &r.counterexample {
                let _ = writeln!(out, "    counterexample: {ce}");
            }
            if let Some(rel) = &r.relations {
                let _ = writeln!(
                    out,
                    "    relations:\n{}",
                    serde_json::to_string_pretty(rel).expect("relations serialize")
                );
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{} checks: {} pass, {} fail, {} hypothesis-not-met, {} skipped",
            s.total, s.pass, s.fail, s.hypothesis_not_met, s.skipped
        );
        out
    }
}
