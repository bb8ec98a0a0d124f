//! Machine-readable verification reports.
//!
//! The JSON bytes are a deterministic function of the configuration: no
//! timestamps or timings are serialized (wall-clock timing goes to the
//! human-readable output only). Every check id maps to exactly one anchor
//! string, the mathematical statement being verified.

use serde::Serialize;

pub const SCHEMA_VERSION: &str = "s2alg-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: String,
    pub ring: String,
    pub seed: u64,
    pub config: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(ring: impl Into<String>, seed: u64, config: impl Into<String>) -> Self {
        Report {
            schema: SCHEMA_VERSION.into(),
            ring: ring.into(),
            seed,
            config: config.into(),
            checks: Vec::new(),
        }
    }

    pub fn record(
        &mut self,
        id: impl Into<String>,
        anchor: impl Into<String>,
        result: Result<(), String>,
    ) {
        let (status, witness) = match result {
            Ok(()) => (Status::Pass, None),
            Err(w) => (Status::Fail, Some(w)),
        };
        self.checks.push(Check {
            id: id.into(),
            anchor: anchor.into(),
            status,
            witness,
        });
    }

    pub fn record_skip(
        &mut self,
        id: impl Into<String>,
        anchor: impl Into<String>,
        reason: impl Into<String>,
    ) {
        self.checks.push(Check {
            id: id.into(),
            anchor: anchor.into(),
            status: Status::Skip,
            witness: Some(reason.into()),
        });
    }

    pub fn failures(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_deterministic_and_versioned() {
        let mut r1 = Report::new("z", 7, "test");
        r1.record("a", "x = x", Ok(()));
        r1.record("b", "y = y", Err("nope".into()));
        r1.record_skip("c", "z = z", "vacuous");
        let mut r2 = Report::new("z", 7, "test");
        r2.record("a", "x = x", Ok(()));
        r2.record("b", "y = y", Err("nope".into()));
        r2.record_skip("c", "z = z", "vacuous");
        assert_eq!(r1.to_json(), r2.to_json());
        assert!(r1.to_json().contains(SCHEMA_VERSION));
        assert_eq!(r1.failures(), 1);
    }
}
