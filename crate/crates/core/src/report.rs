//! Structured pass/fail evidence from verification suites.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{Serialize, SerializeStruct, Serializer};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Not run because a hypothesis of the underlying statement does not hold.
    Skipped(String),
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped(_) => "skipped(hypothesis)",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Serialize for Check {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Check", 3)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("status", self.status.label())?;
        st.serialize_field("detail", &self.detail)?;
        st.end()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub suite: String,
    pub config: BTreeMap<String, String>,
    pub checks: Vec<Check>,
}

impl Serialize for VerificationReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("VerificationReport", 4)?;
        st.serialize_field("suite", &self.suite)?;
        st.serialize_field("config", &self.config)?;
        st.serialize_field("checks", &self.checks)?;
        st.serialize_field("overall", if self.overall() { "pass" } else { "fail" })?;
        st.end()
    }
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        VerificationReport { suite: suite.into(), ..Default::default() }
    }

    pub fn with_config(mut self, key: &str, value: impl ToString) -> Self {
        self.config.insert(key.to_string(), value.to_string());
        self
    }

    pub fn push(&mut self, name: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), status, detail: detail.into() });
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.push(name, Status::from_bool(ok), detail);
    }

    pub fn skip(&mut self, name: impl Into<String>, why: impl Into<String>) {
        let why = why.into();
        self.push(name, Status::Skipped(why.clone()), why);
    }

    /// Appends another report's checks, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: VerificationReport) {
        for c in other.checks {
            let name = if prefix.is_empty() { c.name } else { format!("{prefix}/{}", c.name) };
            self.checks.push(Check { name, ..c });
        }
    }

    /// True when no check failed; skipped checks do not count against the suite.
    pub fn overall(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite: {}", self.suite)?;
        for (k, v) in &self.config {
            writeln!(f, "  {k} = {v}")?;
        }
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            writeln!(f, "{:<width$}  {:<19}  {}", c.name, c.status.label(), c.detail, width = width)?;
        }
        let overall = if self.overall() { "pass" } else { "fail" };
        writeln!(f, "overall: {overall} ({} checks)", self.checks.len())?;
        if !self.overall() {
            writeln!(f, "{} check(s) failed; exit status 1", self.failures().len())?;
        }
        Ok(())
    }
}
