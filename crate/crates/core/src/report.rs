//! Pass/fail records produced by the verification suites.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// One checked claim.
///
/// `margin` is the slack of the inequality computed from central values and
/// `error_budget` the propagated error; the record passes when the margin
/// exceeds the budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub claim: String,
    pub anchor: String,
    pub inputs: serde_json::Value,
    pub inputs_digest: String,
    pub values: BTreeMap<String, f64>,
    pub error_budget: f64,
    pub margin: f64,
    /// Distance from the pass threshold; negative exactly when the record fails.
    pub slack: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn digest_json(v: &serde_json::Value) -> String {
    let text = serde_json::to_string(v).expect("JSON values serialize");
    Sha256::digest(text.as_bytes()).iter().take(12).map(|b| format!("{b:02x}")).collect()
}

impl VerificationRecord {
    pub fn new(claim: &str, anchor: &str, inputs: serde_json::Value) -> Self {
        VerificationRecord {
            claim: claim.to_string(),
            anchor: anchor.to_string(),
            inputs_digest: digest_json(&inputs),
            inputs,
            values: BTreeMap::new(),
            error_budget: 0.0,
            margin: 0.0,
            slack: f64::NEG_INFINITY,
            pass: false,
            note: None,
        }
    }

    pub fn with_value(mut self, key: &str, v: f64) -> Self {
        self.values.insert(key.to_string(), v);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Passes iff `margin > error_budget`.
    pub fn decide(mut self, margin: f64, error_budget: f64) -> Self {
        self.margin = margin;
        self.error_budget = error_budget;
        self.slack = margin - error_budget;
        self.pass = margin.is_finite() && error_budget.is_finite() && margin > error_budget;
        self
    }

    /// Passes iff `margin ≥ −error_budget` (a non-strict inequality that may
    /// hold with equality).
    pub fn decide_within(mut self, margin: f64, error_budget: f64) -> Self {
        self.margin = margin;
        self.error_budget = error_budget;
        self.slack = margin + error_budget;
        self.pass = margin.is_finite() && error_budget.is_finite() && margin >= -error_budget;
        self
    }

    /// Fails the record on a secondary condition whose own slack is `slack`.
    pub fn fail_with(mut self, slack: f64, note: impl Into<String>) -> Self {
        self.pass = false;
        self.slack = self.slack.min(slack).min(-0.0);
        self.with_note(note)
    }

    /// One-line human summary.
    pub fn summary_line(&self) -> String {
        format!(
            "{} {} [{}] margin {:.3e} budget {:.3e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.claim,
            self.inputs,
            self.margin,
            self.error_budget
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

/// All records of a suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub records: Vec<VerificationRecord>,
    pub summary: Summary,
    pub config_digest: String,
    pub wall_clock_seconds: f64,
}

impl VerificationReport {
    pub fn new(suite: &str, records: Vec<VerificationRecord>, config_digest: String, wall_clock_seconds: f64) -> Self {
        let passed = records.iter().filter(|r| r.pass).count();
        let summary = Summary { total: records.len(), passed, failed: records.len() - passed };
        VerificationReport { suite: suite.to_string(), records, summary, config_digest, wall_clock_seconds }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    /// Smallest [`VerificationRecord::slack`] over the records.
    pub fn min_slack(&self) -> Option<f64> {
        self.records.iter().map(|r| r.slack).min_by(f64::total_cmp)
    }
}
