//! Machine-readable output records shared by the CLI and the Python
//! bindings.
//!
//! Every command emits a single [`Envelope`]:
//!
//! ```json
//! {"command": "tables", "n": 12, "payload": {...}, "checks": [{"name": "...", "pass": true}]}
//! ```
//!
//! `verify` replaces `"n"` by `"range": {"from": a, "to": b}`. A failed
//! check carries a `witness` object of named integers. The optional `meta`
//! object only appears when run metadata is requested.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::gcd_spectrum::PrimePowerPartition;
use crate::torsion_ring::PrimarySummand;
use crate::valuation::PrimePower;

/// Named integers locating a failure (`n`, `k`, `p`, `s`, ...).
pub type Witness = BTreeMap<String, i64>;

pub fn witness<const N: usize>(entries: [(&str, u64); N]) -> Witness {
    entries
        .into_iter()
        .map(|(k, v)| (k.to_string(), i64::try_from(v).unwrap_or(i64::MAX)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Check {
    pub fn pass(name: &str) -> Self {
        Self { name: name.to_string(), pass: true, witness: None }
    }

    pub fn fail(name: &str, witness: Witness) -> Self {
        Self { name: name.to_string(), pass: false, witness: Some(witness) }
    }

    /// Passes on `None`, fails with the given witness otherwise.
    pub fn from_witness(name: &str, failure: Option<Witness>) -> Self {
        match failure {
            None => Self::pass(name),
            Some(w) => Self::fail(name, w),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Range {
    pub from: u64,
    pub to: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    N(u64),
    Range(Range),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub version: String,
    pub elapsed_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub command: String,
    #[serde(flatten)]
    pub target: Target,
    pub payload: serde_json::Value,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

impl Envelope {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorPayload {
    pub n: u64,
    pub factors: Vec<PrimePower>,
    pub rendered: String,
}

/// Tables, partition and primary decomposition for one `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub n: u64,
    pub oracle: String,
    /// `b_{n,k}` for `k = 1..=n`.
    pub b_table: Vec<u64>,
    /// `a_{n,k}` for `k = 2..=n`.
    pub a_table: Vec<u64>,
    pub partition: PrimePowerPartition,
    pub chow: Vec<PrimarySummand>,
    /// True when `n = 2`, where the primary decomposition is an extension.
    pub chow_extended: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CstarPayload {
    pub n: u64,
    pub indices: Vec<u64>,
    pub degree: u64,
    pub multiplier: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckTally {
    pub name: String,
    pub passed: u64,
    pub failed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyPayload {
    pub verified: u64,
    pub failures: u64,
    pub ineq_bound: u64,
    pub tallies: Vec<CheckTally>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcd_spectrum::partition;
    use crate::torsion_ring::chow_primary_decomposition;

    #[test]
    fn envelope_layout() {
        let env = Envelope {
            command: "factor".into(),
            target: Target::N(12),
            payload: serde_json::json!({"x": 1}),
            checks: vec![Check::pass("a"), Check::fail("b", witness([("n", 12), ("k", 3)]))],
            meta: None,
        };
        let text = serde_json::to_string(&env).unwrap();
        assert_eq!(
            text,
            r#"{"command":"factor","n":12,"payload":{"x":1},"checks":[{"name":"a","pass":true},{"name":"b","pass":false,"witness":{"k":3,"n":12}}]}"#
        );
        let ranged = Envelope { target: Target::Range(Range { from: 2, to: 5 }), ..env };
        let text = serde_json::to_string(&ranged).unwrap();
        assert!(text.contains(r#""range":{"from":2,"to":5}"#));
        assert_eq!(serde_json::from_str::<Envelope>(&text).unwrap(), ranged);
    }

    #[test]
    fn record_round_trips() {
        let d = chow_primary_decomposition(12).unwrap();
        let record = ReportRecord {
            n: 12,
            oracle: "brute".into(),
            b_table: vec![12, 6, 2, 1, 1, 1, 1, 1, 1, 1, 1, 1],
            a_table: vec![2, 3, 2, 1, 1, 1, 1, 1, 1, 1, 1],
            partition: partition(12).unwrap(),
            chow: d.summands,
            chow_extended: false,
        };
        let value = serde_json::to_value(&record).unwrap();
        assert_eq!(serde_json::from_value::<ReportRecord>(value).unwrap(), record);
    }
}
