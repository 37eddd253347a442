//! Per-claim records and suite reports.

use std::cmp::Ordering;
use std::time::Instant;

use ffhgf::{CycloNum, MatK};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Failing instances kept per record; the first one is the minimal witness.
pub const MAX_WITNESSES: usize = 3;

/// One checked claim: an identity evaluated over a family of instances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    /// Criterion-prefixed id, e.g. `A1/gauss-reflection/q=5`.
    pub claim: String,
    /// The identity being checked, in words.
    pub anchor: String,
    pub params: Value,
    /// Instances evaluated.
    pub checked: u64,
    /// Instances outside the hypotheses of the claim.
    pub skipped: u64,
    /// Displayed value of a spot check, when the claim has one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<Value>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Value>,
    /// Wall time; omitted from reproducible output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl Record {
    /// Numeric criterion index of the claim id (`A12/...` → 12).
    pub fn criterion(&self) -> u32 {
        criterion_of(&self.claim)
    }
}

fn criterion_of(claim: &str) -> u32 {
    let head = claim.split('/').next().unwrap_or("");
    head.trim_start_matches('A').parse().unwrap_or(u32::MAX)
}

/// Orders claim ids by criterion number first, then lexicographically.
pub fn claim_order(a: &str, b: &str) -> Ordering {
    criterion_of(a).cmp(&criterion_of(b)).then_with(|| a.cmp(b))
}

/// Accumulates the instances of one claim.
#[derive(Clone, Debug)]
pub struct Tally {
    claim: String,
    anchor: String,
    params: Value,
    checked: u64,
    skipped: u64,
    failures: u64,
    lhs: Option<Value>,
    rhs: Option<Value>,
    witnesses: Vec<Value>,
    start: Instant,
}

impl Tally {
    pub fn new(claim: impl Into<String>, anchor: impl Into<String>, params: Value) -> Self {
        Tally {
            claim: claim.into(),
            anchor: anchor.into(),
            params,
            checked: 0,
            skipped: 0,
            failures: 0,
            lhs: None,
            rhs: None,
            witnesses: Vec::new(),
            start: Instant::now(),
        }
    }

    /// Records one instance of an exact equality.
    pub fn eq(&mut self, lhs: &CycloNum, rhs: &CycloNum, instance: impl FnOnce() -> Value) {
        self.checked += 1;
        if lhs != rhs {
            self.fail(json!({ "instance": instance(), "lhs": value_json(lhs), "rhs": value_json(rhs) }));
        }
    }

    /// Records one instance of a yes/no property.
    pub fn holds(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.fail(witness());
        }
    }

    /// Records an instance whose evaluation failed unexpectedly.
    pub fn error(&mut self, err: impl std::fmt::Display, instance: impl FnOnce() -> Value) {
        self.checked += 1;
        self.fail(json!({ "instance": instance(), "error": err.to_string() }));
    }

    /// Unwraps a fallible evaluation, recording errors as failures.
    pub fn ok<T, E: std::fmt::Display>(
        &mut self,
        res: std::result::Result<T, E>,
        instance: impl FnOnce() -> Value,
    ) -> Option<T> {
        match res {
            Ok(v) => Some(v),
            Err(e) => {
                self.error(e, instance);
                None
            }
        }
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    /// A displayed spot value, checked like any other instance.
    pub fn spot(&mut self, lhs: &CycloNum, rhs: &CycloNum, instance: impl FnOnce() -> Value) {
        self.lhs = Some(value_json(lhs));
        self.rhs = Some(value_json(rhs));
        self.eq(lhs, rhs, instance);
    }

    fn fail(&mut self, w: Value) {
        self.failures += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(w);
        }
    }

    /// Folds in the instances of a piece computed separately (in order).
    pub fn absorb(&mut self, other: Tally) {
        self.checked += other.checked;
        self.skipped += other.skipped;
        self.failures += other.failures;
        for w in other.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
        if self.lhs.is_none() {
            self.lhs = other.lhs;
            self.rhs = other.rhs;
        }
    }

    pub fn failures(&self) -> u64 {
        self.failures
    }

    /// A record passes when nothing failed and it was not vacuous.
    pub fn finish(mut self) -> Record {
        if self.checked == 0 {
            self.witnesses.push(json!({ "error": "no instance satisfied the hypotheses" }));
        }
        Record {
            pass: self.failures == 0 && self.checked > 0,
            claim: self.claim,
            anchor: self.anchor,
            params: self.params,
            checked: self.checked,
            skipped: self.skipped,
            lhs: self.lhs,
            rhs: self.rhs,
            witnesses: self.witnesses,
            runtime_ms: Some(self.start.elapsed().as_millis() as u64),
        }
    }
}

/// Exact JSON value plus its complex rendering.
pub fn value_json(v: &CycloNum) -> Value {
    let z = v.embed_complex();
    let mut out = v.to_json();
    out["complex"] = json!({ "re": z.re, "im": z.im });
    out
}

/// A matrix over k as rows of element codes.
pub fn mat_json(m: &MatK) -> Value {
    json!(m.to_rows().iter().map(|r| r.iter().map(|e| e.0).collect::<Vec<_>>()).collect::<Vec<_>>())
}

/// Outcome of one suite run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub config: Value,
    pub records: Vec<Record>,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl Report {
    /// Sorts the records by claim id and fills in the totals.
    pub fn new(suite: &str, config: Value, mut records: Vec<Record>, runtime_ms: u64) -> Self {
        records.sort_by(|a, b| claim_order(&a.claim, &b.claim));
        let passed = records.iter().filter(|r| r.pass).count();
        Report {
            suite: suite.into(),
            config,
            total: records.len(),
            failed: records.len() - passed,
            passed,
            records,
            runtime_ms: Some(runtime_ms),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.total > 0
    }

    /// Drops wall-clock fields so that the report is reproducible.
    pub fn without_timing(mut self) -> Self {
        self.runtime_ms = None;
        for r in &mut self.records {
            r.runtime_ms = None;
        }
        self
    }

    pub fn records_for(&self, criterion: u32) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(move |r| r.criterion() == criterion)
    }

    /// One CSV row per record.
    pub fn to_csv(&self) -> crate::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["claim", "anchor", "params", "checked", "skipped", "pass", "witness"])?;
        for r in &self.records {
            w.write_record([
                r.claim.clone(),
                r.anchor.clone(),
                r.params.to_string(),
                r.checked.to_string(),
                r.skipped.to_string(),
                r.pass.to_string(),
                r.witnesses.first().map(|w| w.to_string()).unwrap_or_default(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| crate::CliError::Parse(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn claims_sort_numerically() {
        let mut ids = vec!["A10/x", "A2/y", "A1/z", "A2/a"];
        ids.sort_by(|a, b| claim_order(a, b));
        assert_eq!(ids, ["A1/z", "A2/a", "A2/y", "A10/x"]);
    }

    #[test]
    fn vacuous_records_fail() {
        let t = Tally::new("A1/x", "anything", Value::Null);
        let r = t.finish();
        assert!(!r.pass);
        assert_eq!(r.witnesses.len(), 1);
    }

    #[test]
    fn witnesses_are_capped() {
        let mut t = Tally::new("A1/x", "", Value::Null);
        for i in 0..10 {
            t.holds(false, || json!(i));
        }
        let r = t.finish();
        assert_eq!(r.witnesses, vec![json!(0), json!(1), json!(2)]);
        assert_eq!(r.checked, 10);
    }
}
