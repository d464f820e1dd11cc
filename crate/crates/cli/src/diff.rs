//! Structural comparison of two reports.

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum DiffKind {
    /// Numbers differ beyond the relative tolerance.
    Numeric,
    /// A boolean changed.
    Flag,
    /// Types, lengths, keys or strings differ.
    Structure,
    /// An `<=` check of the second report exceeds the check tolerance.
    CheckTolerance,
}

#[derive(Clone, Debug, Serialize)]
pub struct Difference {
    pub path: String,
    pub kind: DiffKind,
    pub left: Value,
    pub right: Value,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ReportDiff {
    pub differences: Vec<Difference>,
}

impl ReportDiff {
    pub fn is_empty(&self) -> bool {
        self.differences.is_empty()
    }

    pub fn count(&self, kind: DiffKind) -> usize {
        self.differences.iter().filter(|d| d.kind == kind).count()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("diff serializes");
        s.push('\n');
        s
    }
}

pub struct DiffOptions {
    /// `|a − b| ≤ tol · max(1, |a|, |b|)` counts as equal.
    pub tol: f64,
    pub check_tol: Option<f64>,
}

impl Default for DiffOptions {
    fn default() -> Self {
        Self { tol: 1e-9, check_tol: None }
    }
}

pub fn diff_reports(a: &Value, b: &Value, opts: &DiffOptions) -> Result<ReportDiff> {
    let kind = |v: &Value| v.get("kind").and_then(Value::as_str).map(str::to_owned);
    match (kind(a), kind(b)) {
        (Some(x), Some(y)) if x == y => {}
        (Some(x), Some(y)) => return Err(CliError::schema(format!("cannot compare a {x} report with a {y} report"))),
        _ => return Err(CliError::schema("both inputs must be reports with a kind")),
    }
    let mut out = ReportDiff::default();
    walk("", a, b, opts.tol, &mut out);
    if let Some(ct) = opts.check_tol {
        if let Some(checks) = b.get("checks").and_then(Value::as_array) {
            for (i, c) in checks.iter().enumerate() {
                let le = c.get("relation").and_then(Value::as_str) == Some("le");
                let value = c.get("value").and_then(Value::as_f64);
                if let (true, Some(v)) = (le, value) {
                    if v > ct {
                        out.differences.push(Difference {
                            path: format!("checks[{i}]"),
                            kind: DiffKind::CheckTolerance,
                            left: c.get("name").cloned().unwrap_or(Value::Null),
                            right: Value::from(v),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

fn walk(path: &str, a: &Value, b: &Value, tol: f64, out: &mut ReportDiff) {
    let mut push = |kind| {
        out.differences.push(Difference {
            path: path.to_owned(),
            kind,
            left: a.clone(),
            right: b.clone(),
        })
    };
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap_or(f64::NAN), y.as_f64().unwrap_or(f64::NAN));
            if !((x - y).abs() <= tol * 1f64.max(x.abs()).max(y.abs())) {
                push(DiffKind::Numeric);
            }
        }
        (Value::Bool(x), Value::Bool(y)) => {
            if x != y {
                push(DiffKind::Flag);
            }
        }
        (Value::Array(x), Value::Array(y)) => {
            if x.len() != y.len() {
                push(DiffKind::Structure);
                return;
            }
            for (i, (u, v)) in x.iter().zip(y).enumerate() {
                walk(&format!("{path}[{i}]"), u, v, tol, out);
            }
        }
        (Value::Object(x), Value::Object(y)) => {
            if !x.keys().eq(y.keys()) {
                push(DiffKind::Structure);
                return;
            }
            for (k, u) in x {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                walk(&p, u, &y[k], tol, out);
            }
        }
        _ => {
            if a != b {
                push(DiffKind::Structure);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn report(v: f64, pass: bool) -> Value {
        json!({"kind": "convexHull", "pass": pass, "checks": [{"name": "x", "relation": "le", "value": v, "bound": 1.0, "pass": pass}]})
    }

    #[test]
    fn identical_reports_have_no_differences() {
        let a = report(0.5, true);
        assert!(diff_reports(&a, &a, &DiffOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn classifies_differences() {
        let d = diff_reports(&report(0.5, true), &report(0.7, false), &DiffOptions::default()).unwrap();
        assert_eq!(d.count(DiffKind::Numeric), 1);
        assert_eq!(d.count(DiffKind::Flag), 2);
        let tiny = diff_reports(&report(0.5, true), &report(0.5 + 1e-12, true), &DiffOptions::default()).unwrap();
        assert!(tiny.is_empty());
    }

    #[test]
    fn check_tolerance_flags_large_values() {
        let a = report(1e-6, true);
        let d = diff_reports(&a, &a, &DiffOptions { tol: 1e-9, check_tol: Some(1e-8) }).unwrap();
        assert_eq!(d.count(DiffKind::CheckTolerance), 1);
    }

    #[test]
    fn kind_mismatch_is_an_error() {
        let b = json!({"kind": "extend"});
        assert!(diff_reports(&report(0.0, true), &b, &DiffOptions::default()).is_err());
    }
}
