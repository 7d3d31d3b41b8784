//! Machine-readable reports. Field order and check order are fixed, so equal
//! inputs give byte-identical files.

use std::collections::BTreeMap;

use hodge_core::Verdict;
use serde::Serialize;
use serde_json::Value;

use crate::fixture::{render_value, FIXTURE_VERSION};

pub const REPORT_VERSION: &str = "hodge-report/1";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    /// Stable identifier, e.g. `isotropy/H/W(N_1)`.
    pub id: String,
    /// The statement being tested.
    pub claim: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub version: String,
    pub fixture_version: String,
    pub command: String,
    pub fixture: String,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
    pub values: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(command: &str, fixture: &str) -> Self {
        Report {
            version: REPORT_VERSION.into(),
            fixture_version: FIXTURE_VERSION.into(),
            command: command.into(),
            fixture: fixture.into(),
            pass: true,
            checks: Vec::new(),
            values: BTreeMap::new(),
        }
    }

    pub fn check(&mut self, id: impl Into<String>, claim: &str, verdict: &Verdict) {
        let (pass, detail) = match verdict {
            Verdict::Pass => (true, String::new()),
            Verdict::Fail(why) => (false, why.clone()),
        };
        self.pass &= pass;
        self.checks.push(CheckRecord { id: id.into(), claim: claim.into(), pass, detail });
    }

    pub fn value(&mut self, key: &str, v: impl Serialize) {
        self.values.insert(key.into(), serde_json::to_value(v).expect("report value serializes"));
    }

    pub fn first_failure(&self) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        render_value(&serde_json::to_value(self).expect("report serializes"), 0, &mut out);
        out.push('\n');
        out
    }

    /// One line per check.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let mark = if c.pass { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                out.push_str(&format!("{mark}  {}\n", c.id));
            } else {
                out.push_str(&format!("{mark}  {}  ({})\n", c.id, c.detail));
            }
        }
        out
    }
}
