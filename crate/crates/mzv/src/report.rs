//! Machine-readable verification reports.
//!
//! Every verifier returns a [`VerifyReport`]: the configuration that was
//! run, how many cases were checked, and the failing cases (with both
//! sides rendered) if any. Serialization order is fixed by struct and
//! vector order, so identical runs emit byte-identical JSON regardless of
//! worker count.

use serde::Serialize;

/// A failing case of a verification run.
#[derive(Debug, Clone, Serialize)]
pub struct CaseFailure {
    pub case: String,
    pub detail: String,
}

/// Outcome of one verification battery.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub kind: String,
    /// Key/value configuration echo, in insertion order.
    pub config: Vec<(String, String)>,
    pub cases_checked: u64,
    pub failures: Vec<CaseFailure>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn new(kind: &str) -> VerifyReport {
        VerifyReport {
            schema: 1,
            kind: kind.to_string(),
            config: Vec::new(),
            cases_checked: 0,
            failures: Vec::new(),
            passed: true,
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> VerifyReport {
        self.config.push((key.to_string(), value.to_string()));
        self
    }

    /// Record one checked case.
    pub fn record(&mut self, ok: bool, case: impl FnOnce() -> String, detail: impl FnOnce() -> String) {
        self.cases_checked += 1;
        if !ok {
            self.passed = false;
            self.failures.push(CaseFailure { case: case(), detail: detail() });
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
