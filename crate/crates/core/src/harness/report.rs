use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const SCHEMA: u32 = 1;

/// Where a number in a report comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Computed,
    Oracle,
    PaperTarget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// A comparison against a flagged target; never gates exit status.
    Informational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub id: String,
    pub provenance: Provenance,
    /// `stratumwise` or `hypercohomology` for paper-target rows.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table_mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Value>,
    pub actual: Value,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ReportRow {
    pub fn computed(id: impl Into<String>, actual: impl Serialize) -> Self {
        ReportRow {
            id: id.into(),
            provenance: Provenance::Computed,
            table_mode: None,
            expected: None,
            actual: json(actual),
            verdict: Verdict::Pass,
            note: None,
        }
    }

    /// A gating comparison of `actual` against `expected`.
    pub fn compare(id: impl Into<String>, provenance: Provenance, expected: impl Serialize, actual: impl Serialize) -> Self {
        let (expected, actual) = (json(expected), json(actual));
        let verdict = if expected == actual { Verdict::Pass } else { Verdict::Fail };
        ReportRow { id: id.into(), provenance, table_mode: None, expected: Some(expected), actual, verdict, note: None }
    }

    /// A gating boolean check.
    pub fn check(id: impl Into<String>, provenance: Provenance, ok: bool, actual: impl Serialize) -> Self {
        ReportRow {
            id: id.into(),
            provenance,
            table_mode: None,
            expected: None,
            actual: json(actual),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            note: None,
        }
    }

    /// Marks a mismatch as informational.
    pub fn flagged(mut self, note: impl Into<String>) -> Self {
        if self.verdict == Verdict::Fail {
            self.verdict = Verdict::Informational;
        }
        self.note = Some(note.into());
        self
    }

    pub fn mode(mut self, mode: &str) -> Self {
        self.table_mode = Some(mode.into());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn matches(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

pub(crate) fn json(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

/// Output of one harness command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub schema: u32,
    pub command: String,
    /// SHA-256 of the canonical command input.
    pub input_digest: String,
    pub results: BTreeMap<String, Value>,
    pub rows: Vec<ReportRow>,
}

impl ReportBundle {
    pub fn new(command: &str, digest_input: &Value) -> Self {
        let bytes = serde_json::to_vec(digest_input).expect("digest input serializes");
        ReportBundle {
            schema: SCHEMA,
            command: command.into(),
            input_digest: hex::encode(Sha256::digest(&bytes)),
            results: BTreeMap::new(),
            rows: Vec::new(),
        }
    }

    pub fn result(&mut self, key: &str, v: impl Serialize) {
        self.results.insert(key.into(), json(v));
    }

    pub fn push(&mut self, row: ReportRow) {
        self.rows.push(row);
    }

    /// No gating row failed.
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.verdict != Verdict::Fail)
    }

    pub fn failures(&self) -> Vec<&ReportRow> {
        self.rows.iter().filter(|r| r.verdict == Verdict::Fail).collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::BadInput { pointer: String::new(), message: e.to_string() })
    }

    /// RFC 4180 table of the rows.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["id", "provenance", "table_mode", "expected", "actual", "verdict", "note"]).expect("csv header");
        for r in &self.rows {
            w.write_record([
                r.id.clone(),
                label(&r.provenance),
                r.table_mode.clone().unwrap_or_default(),
                r.expected.as_ref().map(compact).unwrap_or_default(),
                compact(&r.actual),
                label(&r.verdict),
                r.note.clone().unwrap_or_default(),
            ])
            .expect("csv row");
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("csv is utf-8")
    }

    /// Aligned plain-text rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}  schema: {}  digest: {}", self.command, self.schema, self.input_digest);
        for (k, v) in &self.results {
            let _ = writeln!(out, "{k}: {}", compact(v));
        }
        if self.rows.is_empty() {
            return out;
        }
        let cells: Vec<[String; 5]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.id.clone(),
                    label(&r.provenance),
                    r.expected.as_ref().map(compact).unwrap_or_else(|| "-".into()),
                    compact(&r.actual),
                    label(&r.verdict),
                ]
            })
            .collect();
        let head = ["row", "source", "expected", "actual", "verdict"];
        let width: Vec<usize> = (0..5).map(|i| cells.iter().map(|c| c[i].chars().count()).max().unwrap_or(0).max(head[i].len())).collect();
        let line = |c: &[String]| -> String {
            c.iter().enumerate().map(|(i, x)| format!("{x:<w$}", w = width[i])).collect::<Vec<_>>().join("  ").trim_end().to_string()
        };
        let _ = writeln!(out, "{}", line(&head.map(String::from)));
        for c in &cells {
            let _ = writeln!(out, "{}", line(c));
        }
        out
    }
}

fn label(v: &impl Serialize) -> String {
    json(v).as_str().unwrap_or_default().to_string()
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gating_and_flags() {
        let mut b = ReportBundle::new("ih", &json("x"));
        b.push(ReportRow::compare("a", Provenance::Oracle, [1, 0], [1, 0]));
        assert!(b.passed());
        b.push(ReportRow::compare("b", Provenance::PaperTarget, [2], [1]).flagged("flagged target"));
        assert!(b.passed());
        b.push(ReportRow::compare("c", Provenance::Oracle, [2], [1]));
        assert!(!b.passed());
        assert_eq!(b.failures()[0].id, "c");
    }

    #[test]
    fn json_roundtrip_and_csv() {
        let mut b = ReportBundle::new("derham", &json(1));
        b.result("dims", [2, 1, 1]);
        b.push(ReportRow::compare("t, \"quoted\"", Provenance::PaperTarget, [2, 1, 1], [2, 1, 1]).mode("stratumwise"));
        assert_eq!(ReportBundle::from_json(&b.to_json()).unwrap(), b);
        let csv = b.to_csv();
        assert!(csv.contains("\"t, \"\"quoted\"\"\",paper-target,stratumwise,\"[2,1,1]\""));
        assert!(b.to_text().contains("paper-target"));
        assert_eq!(b.input_digest.len(), 64);
    }
}
