//! Command reports: one JSON object per run, keys in sorted order.

use std::time::Instant;

use quadrep_core::{PHCertificate, Verdict};
use serde_json::{json, Value};

/// How a command ended. Reports are JSON text.
pub enum Outcome {
    Done(Option<String>),
    Failed(String),
    Usage(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// One verdict. Every check carries the same keys; unused ones are `null`.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub method: Option<String>,
    pub value: Option<Value>,
    pub tolerance: Option<f64>,
    pub detail: String,
    pub witness: Option<String>,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status,
            method: None,
            value: None,
            tolerance: None,
            detail: detail.into(),
            witness: None,
        }
    }

    pub fn numeric(
        name: impl Into<String>,
        value: Value,
        tolerance: f64,
        passed: bool,
        detail: impl Into<String>,
    ) -> Self {
        let status = if passed { Status::Pass } else { Status::Fail };
        Self {
            value: Some(value),
            tolerance: Some(tolerance),
            ..Self::new(name, status, detail)
        }
    }

    pub fn from_certificate(name: impl Into<String>, cert: &PHCertificate) -> Self {
        let status = if cert.verdict == Verdict::Pass {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            method: Some(cert.method.as_str().to_string()),
            value: Some(json!(cert.claimed_order)),
            witness: cert.witness.as_ref().map(ToString::to_string),
            ..Self::new(name, status, cert.detail.to_string())
        }
    }

    pub fn with_method(mut self, method: &str) -> Self {
        self.method = Some(method.to_string());
        self
    }

    fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "verdict": self.status.as_str(),
            "method": self.method,
            "value": self.value,
            "tolerance": self.tolerance,
            "detail": self.detail,
            "witness": self.witness,
        })
    }
}

pub struct Report {
    argv: Vec<String>,
    label: String,
    started: Instant,
    checks: Vec<CheckResult>,
}

impl Report {
    pub fn new(argv: &[String], label: impl Into<String>) -> Self {
        Self {
            argv: argv.to_vec(),
            label: label.into(),
            started: Instant::now(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: CheckResult) {
        self.checks.push(check);
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    /// The finished report, as a success or a mathematical failure.
    pub fn finish(self) -> Outcome {
        let passed = self.passed();
        let verdict = if passed {
            "pass"
        } else if self.checks.iter().any(|c| c.status == Status::Fail) {
            "fail"
        } else {
            "inconclusive"
        };
        let text = json!({
            "command": self.argv,
            "map": self.label,
            "verdict": verdict,
            "checks": self.checks.iter().map(CheckResult::to_json).collect::<Vec<_>>(),
            "wall_time_s": self.started.elapsed().as_secs_f64(),
        })
        .to_string();
        if passed {
            Outcome::Done(Some(text))
        } else {
            Outcome::Failed(text)
        }
    }
}
