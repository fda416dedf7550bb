//! Command reports: per-check outcomes, a machine section with sorted keys,
//! and a human section.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// An exact counterexample or the reason for a failure.
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub checks: Vec<Check>,
    /// Deterministic results; serialized with sorted keys.
    pub data: Map<String, Value>,
    /// Free-form lines for the human section.
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            checks: Vec::new(),
            data: Map::new(),
            lines: Vec::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, witness: Option<String>) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            witness,
        });
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.check(name, true, None);
    }

    pub fn fail(&mut self, name: impl Into<String>, witness: impl Into<String>) {
        self.check(name, false, Some(witness.into()));
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.data.insert(key.to_string(), value.into());
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn machine(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({"name": c.name, "pass": c.pass, "witness": c.witness}))
            .collect();
        json!({
            "command": self.command,
            "checks": checks,
            "data": Value::Object(self.data.clone()),
            "status": if self.passed() { "pass" } else { "fail" },
        })
    }

    pub fn machine_text(&self) -> String {
        serde_json::to_string_pretty(&self.machine()).expect("json values serialize")
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "$ {}", self.command);
        for line in &self.lines {
            let _ = writeln!(out, "{line}");
        }
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            match &c.witness {
                Some(w) => {
                    let _ = writeln!(out, "{tag} {}: {w}", c.name);
                }
                None => {
                    let _ = writeln!(out, "{tag} {}", c.name);
                }
            }
        }
        let passed = self.checks.iter().filter(|c| c.pass).count();
        let _ = writeln!(out, "{passed}/{} checks passed", self.checks.len());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_keys_are_sorted_and_status_follows_checks() {
        let mut r = Report::new("trunclab check");
        r.set("zeta", 1);
        r.set("alpha", "x");
        r.pass("first");
        let text = r.machine_text();
        assert!(text.find("\"alpha\"").unwrap() < text.find("\"zeta\"").unwrap());
        assert!(text.find("\"checks\"").unwrap() < text.find("\"command\"").unwrap());
        assert_eq!(r.exit_code(), 0);
        r.fail("second", "(1,0)");
        assert_eq!(r.exit_code(), 1);
        assert!(r.human().contains("FAIL second: (1,0)"));
        assert_eq!(r.machine()["status"], "fail");
    }
}
