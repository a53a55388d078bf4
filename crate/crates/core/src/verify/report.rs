//! Machine-readable suite reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
    /// Informational; never affects the verdict.
    Info,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub millis: u64,
}

impl CheckResult {
    pub fn new(id: &str, params: &[(&str, String)], status: Status) -> Self {
        CheckResult {
            id: id.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            status,
            witness: None,
            millis: 0,
        }
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    #[serde(rename = "config-digest")]
    pub config_digest: String,
    pub results: Vec<CheckResult>,
}

impl Report {
    pub fn new(suite: &str, config_digest: &str) -> Self {
        Report {
            suite: suite.to_string(),
            config_digest: config_digest.to_string(),
            results: vec![],
        }
    }

    pub fn push(&mut self, r: CheckResult) {
        self.results.push(r);
    }

    pub fn extend(&mut self, other: Report) {
        self.results.extend(other.results);
    }

    pub fn passed(&self) -> bool {
        self.results
            .iter()
            .all(|r| matches!(r.status, Status::Pass | Status::Info))
    }

    pub fn count(&self, s: Status) -> usize {
        self.results.iter().filter(|r| r.status == s).count()
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.results
            .iter()
            .find(|r| matches!(r.status, Status::Fail | Status::Error))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("suite {} config {}\n", self.suite, self.config_digest);
        for r in &self.results {
            let tag = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Error => "ERROR",
                Status::Info => "INFO",
            };
            let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(out, "{tag:5} {} {}", r.id, params.join(" ")).unwrap();
            if let Some(w) = &r.witness {
                write!(out, " :: {w}").unwrap();
            }
            out.push('\n');
        }
        writeln!(
            out,
            "total {} pass {} fail {} error {} info {}",
            self.results.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Error),
            self.count(Status::Info)
        )
        .unwrap();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip() {
        let mut r = Report::new("cartan", "abc");
        r.push(CheckResult::new("cartan.ef", &[("i", "0".into())], Status::Pass));
        r.push(CheckResult::new("cartan.ef", &[("i", "1".into())], Status::Fail).with_witness("p"));
        let s = r.to_json();
        assert!(s.contains("\"config-digest\""));
        assert_eq!(Report::from_json(&s).unwrap(), r);
        assert!(!r.passed());
        assert_eq!(r.first_failure().unwrap().witness.as_deref(), Some("p"));
        assert!(r.to_text().contains("FAIL  cartan.ef i=1 :: p"));
    }
}
