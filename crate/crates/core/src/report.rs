//! Check results and suite reports.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub instance: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckResult {
    pub fn pass(check: impl Into<String>, instance: impl Into<String>) -> Self {
        CheckResult {
            check: check.into(),
            instance: instance.into(),
            status: Status::Pass,
            witness: None,
        }
    }

    pub fn fail(check: impl Into<String>, instance: impl Into<String>, witness: impl Into<String>) -> Self {
        CheckResult {
            check: check.into(),
            instance: instance.into(),
            status: Status::Fail,
            witness: Some(witness.into()),
        }
    }

    /// Pass when `witness` is `None`.
    pub fn from_witness(check: impl Into<String>, instance: impl Into<String>, witness: Option<String>) -> Self {
        match witness {
            None => CheckResult::pass(check, instance),
            Some(w) => CheckResult::fail(check, instance, w),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.status, self.check, self.instance)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report<C: Serialize> {
    pub version: String,
    pub config: C,
    pub results: Vec<CheckResult>,
}

impl<C: Serialize> Report<C> {
    pub fn new(config: C, results: Vec<CheckResult>) -> Self {
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            results,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.results.iter().all(CheckResult::passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// One `PASS|FAIL <check> <instance>` line per result; a failure is
    /// followed by an indented `witness:` line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&format!("{r}\n"));
            if let Some(w) = &r.witness {
                out.push_str(&format!("    witness: {w}\n"));
            }
        }
        out
    }
}
