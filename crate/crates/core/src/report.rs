//! Deterministic tabular reports in TSV or JSON.
//!
//! TSV output starts with `#`-prefixed metadata lines (command, sign
//! convention, fixture hash, failures), then the header row and the data rows
//! sorted by their cells. JSON carries the same content with sorted object keys.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::conventions::fixture_hash;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("cannot write report to {path}: {source}")]
    Unwritable { path: String, source: std::io::Error },
    #[error("row has {got} cells but the report has {want} columns")]
    RowWidth { got: usize, want: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Tsv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tsv" => Ok(Format::Tsv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format {s:?} (expected tsv or json)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Text(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(i) => write!(f, "{i}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(if v { "yes" } else { "no" }.into())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub convention: String,
    pub columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
    failures: Vec<String>,
}

impl Report {
    pub fn new(command: &str, convention: &str, columns: &[&str]) -> Self {
        Self {
            command: command.to_string(),
            convention: convention.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            failures: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<(), ReportError> {
        if row.len() != self.columns.len() {
            return Err(ReportError::RowWidth { got: row.len(), want: self.columns.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    /// Record a failed check; `expected` and `computed` are shown side by side.
    pub fn fail(&mut self, what: &str, expected: impl fmt::Display, computed: impl fmt::Display) {
        self.failures.push(format!("{what}: expected {expected}, computed {computed}"));
    }

    /// Append the rows and failures of a report with the same columns.
    pub fn absorb(&mut self, other: Report) {
        assert_eq!(self.columns, other.columns, "absorbed report has different columns");
        if other.convention != self.convention {
            self.convention = format!("{}/{}", self.convention, other.convention);
        }
        self.rows.extend(other.rows);
        self.failures.extend(other.failures);
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failures(&self) -> &[String] {
        &self.failures
    }

    pub fn rows(&self) -> Vec<Vec<Cell>> {
        let mut rows = self.rows.clone();
        rows.sort();
        rows
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("#command\t{}\n", self.command));
        out.push_str(&format!("#convention\t{}\n", self.convention));
        out.push_str(&format!("#fixture_sha256\t{}\n", fixture_hash()));
        let mut failures = self.failures.clone();
        failures.sort();
        for f in failures {
            out.push_str(&format!("#failure\t{f}\n"));
        }
        out.push_str(&self.columns.join("\t"));
        out.push('\n');
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows()
            .into_iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(row.into_iter().map(|c| serde_json::to_value(c).expect("cell serializes")))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut failures = self.failures.clone();
        failures.sort();
        let v = json!({
            "command": self.command,
            "convention": self.convention,
            "fixture_sha256": fixture_hash(),
            "columns": self.columns,
            "rows": rows,
            "failures": failures,
            "ok": self.ok(),
        });
        let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Tsv => self.to_tsv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Write `report` to `out`, or to standard output when `out` is `None`.
pub fn report_emit(report: &Report, format: Format, out: Option<&Path>) -> Result<(), ReportError> {
    let text = report.render(format);
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|source| ReportError::Unwritable { path: path.display().to_string(), source })
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| ReportError::Unwritable { path: "<stdout>".into(), source }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo", "koszul-even", &["b", "d", "h"]);
        r.push(vec![2i64.into(), 1i64.into(), 1usize.into()]).unwrap();
        r.push(vec![1i64.into(), 0i64.into(), 0usize.into()]).unwrap();
        r
    }

    #[test]
    fn empty_report_is_header_only() {
        let r = Report::new("demo", "koszul-even", &["b", "d"]);
        let tsv = r.to_tsv();
        let body: Vec<&str> = tsv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body, vec!["b\td"]);
    }

    #[test]
    fn rows_are_sorted_and_rendering_is_stable() {
        let r = sample();
        let tsv = r.to_tsv();
        let body: Vec<&str> = tsv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body, vec!["b\td\th", "1\t0\t0", "2\t1\t1"]);
        assert_eq!(tsv, sample().to_tsv());
        assert_eq!(r.to_json(), sample().to_json());
    }

    #[test]
    fn json_and_tsv_agree() {
        let r = sample();
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        let from_json: Vec<String> = v["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|row| r.columns.iter().map(|c| row[c].to_string()).collect::<Vec<_>>().join("\t"))
            .collect();
        let tsv = r.to_tsv();
        let from_tsv: Vec<&str> = tsv.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
        assert_eq!(from_json, from_tsv);
        assert_eq!(v["fixture_sha256"], fixture_hash());
    }

    #[test]
    fn failures_and_bad_paths() {
        let mut r = sample();
        assert!(r.push(vec![1i64.into()]).is_err());
        r.fail("h(2,1)", 1, 0);
        assert!(!r.ok());
        assert!(r.to_tsv().contains("#failure\th(2,1): expected 1, computed 0"));
        let err = report_emit(&r, Format::Tsv, Some(Path::new("/nonexistent-dir/x.tsv")));
        assert!(matches!(err, Err(ReportError::Unwritable { .. })));
    }
}
