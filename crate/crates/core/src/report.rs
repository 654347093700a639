//! Structured outcomes of identity and property checks.

use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Values rendered exactly, as `label = value`.
    pub witnesses: Vec<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        Check { name: name.into(), status, witnesses: Vec::new() }
    }

    pub fn pass(name: impl Into<String>) -> Self {
        Check::new(name, Status::Pass)
    }

    pub fn fail(name: impl Into<String>) -> Self {
        Check::new(name, Status::Fail)
    }

    /// `pass` when `ok`, otherwise `fail`.
    pub fn expect(name: impl Into<String>, ok: bool) -> Self {
        Check::new(name, if ok { Status::Pass } else { Status::Fail })
    }

    pub fn witness(mut self, label: &str, value: impl std::fmt::Display) -> Self {
        self.witnesses.push(format!("{label} = {value}"));
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub command: String,
    pub ring: String,
    pub precision: i64,
    pub checks: Vec<Check>,
    pub status: Status,
    pub seed: Option<u64>,
}

impl VerificationReport {
    pub fn new(command: impl Into<String>, ring: impl Into<String>, precision: i64, seed: Option<u64>) -> Self {
        VerificationReport {
            command: command.into(),
            ring: ring.into(),
            precision,
            checks: Vec::new(),
            status: Status::Pass,
            seed,
        }
    }

    pub fn push(&mut self, check: Check) {
        if check.status == Status::Fail {
            self.status = Status::Fail;
        }
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        for c in checks {
            self.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} over {} (N = {})", self.command, self.ring, self.precision);
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed {seed}");
        }
        for c in &self.checks {
            let _ = writeln!(out, "[{}] {}", c.status.name(), c.name);
            for w in &c.witnesses {
                let _ = writeln!(out, "    {w}");
            }
        }
        let _ = writeln!(out, "status: {}", self.status.name());
        out
    }
}
