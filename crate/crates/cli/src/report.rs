//! Machine-readable scenario reports.

use std::fmt;

use gqd_core::Tolerance;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::scenario::Kind;

/// How a check compares its measured value against its bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Relation {
    /// `value <= bound`.
    Le,
    /// `value >= bound`.
    Ge,
    /// A boolean claim; `value` is 1 when it holds.
    Holds,
}

/// One embedded assertion with the residual and the tolerance it was held to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Check {
    pub name: String,
    pub relation: Relation,
    /// Non-finite values serialize as `null` and never pass.
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    pub fn le(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            relation: Relation::Le,
            value,
            bound,
            pass: value <= bound,
        }
    }

    pub fn ge(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            relation: Relation::Ge,
            value,
            bound,
            pass: value >= bound,
        }
    }

    pub fn holds(name: impl Into<String>, holds: bool) -> Self {
        Self {
            name: name.into(),
            relation: Relation::Holds,
            value: if holds { 1.0 } else { 0.0 },
            bound: 1.0,
            pass: holds,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        match self.relation {
            Relation::Le => write!(f, "{status} {}: {:.3e} <= {:.3e}", self.name, self.value, self.bound),
            Relation::Ge => write!(f, "{status} {}: {:.3e} >= {:.3e}", self.name, self.value, self.bound),
            Relation::Holds => write!(f, "{status} {}", self.name),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub kind: Kind,
    pub seed: u64,
    pub tolerances: Tolerance,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub data: Map<String, Value>,
}

impl Report {
    pub fn new(kind: Kind, seed: u64, tolerances: Tolerance) -> Self {
        Self {
            kind,
            seed,
            tolerances,
            pass: true,
            checks: Vec::new(),
            data: Map::new(),
        }
    }

    pub fn check(&mut self, c: Check) {
        self.pass &= c.pass;
        self.checks.push(c);
    }

    pub fn le(&mut self, name: impl Into<String>, value: f64, bound: f64) {
        self.check(Check::le(name, value, bound));
    }

    pub fn ge(&mut self, name: impl Into<String>, value: f64, bound: f64) {
        self.check(Check::ge(name, value, bound));
    }

    pub fn holds(&mut self, name: impl Into<String>, holds: bool) {
        self.check(Check::holds(name, holds));
    }

    pub fn put(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report data is serializable");
        self.data.insert(key.to_string(), v);
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }

    /// One line per check.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&c.to_string());
            s.push('\n');
        }
        let status = if self.pass { "PASS" } else { "FAIL" };
        let failed = self.failures().count();
        s.push_str(&format!(
            "{status} {}: {} checks, {failed} failed\n",
            self.kind.name(),
            self.checks.len()
        ));
        s
    }
}
