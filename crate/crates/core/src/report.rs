//! Named check outcomes collected by every verifier.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    /// Exploratory probe found no counterexample.
    Consistent,
    /// Exploratory probe found a counterexample.
    Refuted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    /// The statement being checked, in plain mathematical notation.
    pub identity: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    /// Wall time; filled only on request so reports stay reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Report {
    checks: Vec<CheckResult>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, result: CheckResult) {
        self.checks.push(result);
    }

    fn entry(&mut self, name: &str, identity: &str, status: Status, witness: Option<Value>) {
        self.push(CheckResult {
            name: name.to_string(),
            identity: identity.to_string(),
            status,
            witness,
            elapsed_ms: None,
        });
    }

    pub fn pass(&mut self, name: &str, identity: &str) {
        self.entry(name, identity, Status::Pass, None);
    }

    pub fn pass_with(&mut self, name: &str, identity: &str, witness: Value) {
        self.entry(name, identity, Status::Pass, Some(witness));
    }

    pub fn fail(&mut self, name: &str, identity: &str, witness: Value) {
        self.entry(name, identity, Status::Fail, Some(witness));
    }

    pub fn skip(&mut self, name: &str, identity: &str, reason: &str) {
        self.entry(name, identity, Status::Skipped, Some(Value::from(reason)));
    }

    pub fn exploratory(&mut self, name: &str, identity: &str, consistent: bool, witness: Value) {
        let status = if consistent {
            Status::Consistent
        } else {
            Status::Refuted
        };
        self.entry(name, identity, status, Some(witness));
    }

    /// Pass when `ok`; otherwise fail with the lazily built witness.
    pub fn check(&mut self, name: &str, identity: &str, ok: bool, witness: impl FnOnce() -> Value) {
        if ok {
            self.pass(name, identity);
        } else {
            self.fail(name, identity, witness());
        }
    }

    /// Records `Err` as a failure whose witness is the error text.
    pub fn check_result<T>(&mut self, name: &str, identity: &str, r: &crate::Result<T>) {
        match r {
            Ok(_) => self.pass(name, identity),
            Err(e) => self.fail(name, identity, Value::from(e.to_string())),
        }
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn checks(&self) -> &[CheckResult] {
        &self.checks
    }

    pub fn checks_mut(&mut self) -> &mut [CheckResult] {
        &mut self.checks
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn status(&self, name: &str) -> Option<Status> {
        self.get(name).map(|c| c.status)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn all_pass(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn summary(&self) -> Summary {
        let mut s = Summary::default();
        for c in &self.checks {
            match c.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Skipped => s.skipped += 1,
                Status::Consistent | Status::Refuted => {}
            }
        }
        s
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_counts_and_serialization() {
        let mut r = Report::new();
        r.pass("a", "1 = 1");
        r.check("b", "1 = 2", false, || Value::from("1 != 2"));
        r.skip("c", "x", "too large");
        r.exploratory("d", "probe", true, Value::Null);
        assert_eq!(
            r.summary(),
            Summary {
                pass: 1,
                fail: 1,
                skipped: 1
            }
        );
        assert!(!r.all_pass());
        let json = serde_json::to_string(&r.checks()[1]).unwrap();
        assert_eq!(
            json,
            r#"{"name":"b","identity":"1 = 2","status":"fail","witness":"1 != 2"}"#
        );
        assert_eq!(
            serde_json::to_value(Status::Consistent).unwrap(),
            "consistent"
        );
    }
}
