use std::fmt::Write as _;

use serde::Serialize;
use speclat_core::rational::RatVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Witness,
    NotApplicable,
    ScopeLimited,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Witness => "witness",
            Verdict::NotApplicable => "not-applicable",
            Verdict::ScopeLimited => "scope-limited",
        }
    }
}

/// An exact vector attached to a result, printed as `p/q` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub label: String,
    pub vector: Vec<String>,
}

impl Certificate {
    pub fn new(label: impl Into<String>, v: &RatVector) -> Self {
        Certificate {
            label: label.into(),
            vector: v.to_strings(),
        }
    }

    pub fn parse_vector(&self) -> speclat_core::Result<RatVector> {
        RatVector::parse(&self.vector.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub check: String,
    /// The statement being checked, in words.
    pub claim: String,
    pub verdict: Verdict,
    pub details: Vec<String>,
    pub certificates: Vec<Certificate>,
}

impl CheckResult {
    pub fn new(check: &str, claim: &str, verdict: Verdict) -> Self {
        CheckResult {
            check: check.to_string(),
            claim: claim.to_string(),
            verdict,
            details: Vec::new(),
            certificates: Vec::new(),
        }
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.details.push(d.into());
        self
    }

    pub fn cert(mut self, label: impl Into<String>, v: &RatVector) -> Self {
        self.certificates.push(Certificate::new(label, v));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    #[serde(serialize_with = "ordered_map")]
    pub inputs: Vec<(String, String)>,
    pub results: Vec<CheckResult>,
    pub exit_code: i32,
}

fn ordered_map<S: serde::Serializer>(pairs: &[(String, String)], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(pairs.len()))?;
    for (k, v) in pairs {
        m.serialize_entry(k, v)?;
    }
    m.end()
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SCOPE: i32 = 3;

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: Vec::new(),
            results: Vec::new(),
            exit_code: EXIT_OK,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<String>) {
        self.inputs.push((key.to_string(), value.into()));
    }

    pub fn push(&mut self, r: CheckResult) {
        self.results.push(r);
    }

    /// Any `fail` verdict turns the exit code into a proposition failure.
    pub fn settle(mut self) -> Self {
        if self.results.iter().any(|r| r.verdict == Verdict::Fail) {
            self.exit_code = EXIT_FAILURE;
        }
        self
    }

    pub fn error(command: &str, code: i32, message: String) -> Self {
        let verdict = if code == EXIT_SCOPE {
            Verdict::ScopeLimited
        } else {
            Verdict::Fail
        };
        let mut r = Report::new(command);
        r.push(CheckResult::new("error", "the command completed", verdict).detail(message));
        r.exit_code = code;
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "  {k}: {v}");
        }
        for r in &self.results {
            let _ = writeln!(out, "[{}] {}: {}", r.verdict.label(), r.check, r.claim);
            for d in &r.details {
                let _ = writeln!(out, "    {d}");
            }
            for c in &r.certificates {
                let _ = writeln!(out, "    {} = ({})", c.label, c.vector.join(", "));
            }
        }
        let _ = writeln!(out, "exit code: {}", self.exit_code);
        out
    }
}
