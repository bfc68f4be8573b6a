use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

pub const RUN_SCHEMA: &str = "qweyl-run/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Not run within the resource bound.
    Skip,
    /// Informational; never fails a run.
    Finding,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::Skip => "skip",
            Verdict::Finding => "note",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// Short label of the statement being checked, e.g. `z-element`.
    pub tag: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, tag: &str, ok: bool) -> Self {
        CheckRecord {
            name: name.into(),
            tag: tag.to_string(),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            witness: None,
        }
    }

    pub fn finding(name: impl Into<String>, tag: &str, witness: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            tag: tag.to_string(),
            verdict: Verdict::Finding,
            witness: Some(witness.into()),
        }
    }

    pub fn skip(name: impl Into<String>, tag: &str, reason: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            tag: tag.to_string(),
            verdict: Verdict::Skip,
            witness: Some(reason.into()),
        }
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    /// Attach the witness only when the check failed.
    pub fn witness_on_fail(self, w: impl FnOnce() -> String) -> Self {
        if self.verdict == Verdict::Fail {
            self.with_witness(w())
        } else {
            self
        }
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

/// Machine-readable result of one command.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
    /// Plain-text body printed before the check lines.
    #[serde(skip)]
    pub lines: Vec<String>,
    /// Leave check records out of the plain-text output.
    #[serde(skip)]
    pub lines_only: bool,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            schema: RUN_SCHEMA,
            command: command.to_string(),
            parameters: BTreeMap::new(),
            checks: Vec::new(),
            result: Value::Null,
            wall_time_ms: None,
            lines: Vec::new(),
            lines_only: false,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters
            .insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn push(&mut self, check: CheckRecord) {
        self.checks.push(check);
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn set_result(&mut self, value: impl Serialize) {
        self.result = serde_json::to_value(value).unwrap_or(Value::Null);
    }

    pub fn passed(&self) -> bool {
        !self.checks.iter().any(CheckRecord::failed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        for c in self.checks.iter().filter(|_| !self.lines_only) {
            out.push_str(&format!("[{}] {}", c.verdict.label(), c.name));
            if let Some(w) = &c.witness {
                out.push_str(&format!(": {w}"));
            }
            out.push('\n');
        }
        if let Some(ms) = self.wall_time_ms {
            out.push_str(&format!("time {ms} ms\n"));
        }
        out
    }
}
