//! Pass/fail records shared by the checking operations.

use serde::{Deserialize, Serialize};

use crate::SCHEMA_VERSION;

/// How much a verdict can be trusted beyond the data it was computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evidence {
    /// Decided exactly for the symbolic input.
    Exact,
    /// Holds on the sampled truncation only.
    TruncationOnly,
    /// Floating-point evaluation with the recorded slack.
    Numerical,
}

/// One compared quantity: `lhs <= rhs + slack`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckItem {
    pub label: String,
    #[serde(with = "crate::json::ext_real")]
    pub lhs: f64,
    #[serde(with = "crate::json::ext_real")]
    pub rhs: f64,
    pub slack: f64,
    pub passed: bool,
}

impl CheckItem {
    pub fn at_most(label: impl Into<String>, lhs: f64, rhs: f64, slack: f64) -> Self {
        CheckItem {
            label: label.into(),
            lhs,
            rhs,
            slack,
            passed: lhs <= rhs + slack,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub schema: String,
    pub check: String,
    pub passed: bool,
    pub evidence: Evidence,
    pub items: Vec<CheckItem>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn from_items(check: impl Into<String>, evidence: Evidence, items: Vec<CheckItem>) -> Self {
        CheckReport {
            schema: SCHEMA_VERSION.to_string(),
            check: check.into(),
            passed: items.iter().all(|i| i.passed),
            evidence,
            items,
            notes: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| !i.passed)
    }
}
