//! Outcome types shared by every verifier.

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Status of a single verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    HypothesisNotMet,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::HypothesisNotMet => "hypothesis-not-met",
            Status::Skipped => "skipped",
        }
    }

    pub fn is_fail(self) -> bool {
        self == Status::Fail
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Generic result of a check: status, a JSON witness, and a counterexample
/// whenever the status is [`Status::Fail`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub status: Status,
    pub witness: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl Outcome {
    pub fn pass(witness: Value) -> Self {
        Outcome {
            status: Status::Pass,
            witness,
            counterexample: None,
        }
    }

    pub fn fail(witness: Value, counterexample: Value) -> Self {
        Outcome {
            status: Status::Fail,
            witness,
            counterexample: Some(counterexample),
        }
    }

    /// Pass when `ok`, otherwise fail with the given counterexample.
    pub fn from_check(ok: bool, witness: Value, counterexample: impl FnOnce() -> Value) -> Self {
        if ok {
            Outcome::pass(witness)
        } else {
            Outcome::fail(witness, counterexample())
        }
    }

    pub fn hypothesis_not_met(witness: Value) -> Self {
        Outcome {
            status: Status::HypothesisNotMet,
            witness,
            counterexample: None,
        }
    }

    /// Downgrade a pass/fail to hypothesis-not-met, keeping the findings as
    /// an exploratory result.
    pub fn exploratory(mut self, reason: &str) -> Self {
        let findings = std::mem::take(&mut self.witness);
        self.witness = serde_json::json!({
            "exploratory": true,
            "reason": reason,
            "observed_status": self.status,
            "findings": findings,
            "counterexample": self.counterexample.take(),
        });
        self.status = Status::HypothesisNotMet;
        self
    }
}
