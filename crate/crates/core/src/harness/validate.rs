//! Standalone checks for files emitted by the harness.
//!
//! The file kind is detected from the CSV header (or `.json` extension):
//!
//! * per-round CSV: rounds consecutive, alive non-increasing, residual
//!   energy non-increasing, cumulative packets non-decreasing;
//! * long-format comparison CSV: first <= half <= last death where defined;
//! * table and sweep CSVs: every numeric cell parses;
//! * JSON: parses; run summaries must also resolve their embedded config.

use std::path::Path;

use serde_json::Value;

use crate::error::{Result, SimError};
use crate::harness::config::ScenarioSpec;
use crate::harness::output::ROUNDS_HEADER;
use crate::harness::report::{RUNS_HEADER, SWEEP_HEADER, TABLE_HEADER};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Rounds,
    Runs,
    Table,
    Sweep,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validation {
    pub kind: Option<FileKind>,
    pub rows: usize,
    pub problems: Vec<String>,
}

impl Validation {
    pub fn ok(&self) -> bool {
        self.problems.is_empty()
    }
}

pub fn validate_path(path: impl AsRef<Path>) -> Result<Validation> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
    let is_json = path.extension().is_some_and(|e| e == "json");
    Ok(if is_json { validate_json(&text) } else { validate_csv(&text) })
}

pub fn validate_json(text: &str) -> Validation {
    let mut v = Validation {
        kind: Some(FileKind::Json),
        rows: 0,
        problems: Vec::new(),
    };
    match serde_json::from_str::<Value>(text) {
        Err(e) => v.problems.push(format!("invalid JSON: {e}")),
        Ok(value) => {
            if value.get("config").is_some() {
                if let Err(e) = ScenarioSpec::from_value(value.clone()).and_then(|s| s.resolve()) {
                    v.problems.push(format!("embedded config does not resolve: {e}"));
                }
                let get = |k: &str| value.get(k).and_then(Value::as_u64);
                check_death_order(
                    get("first_death_round"),
                    get("half_death_round"),
                    get("last_death_round"),
                    "summary",
                    &mut v.problems,
                );
            }
        }
    }
    v
}

fn check_death_order(first: Option<u64>, half: Option<u64>, last: Option<u64>, at: &str, problems: &mut Vec<String>) {
    let pairs = [(first, half, "first > half"), (half, last, "half > last"), (first, last, "first > last")];
    for (a, b, what) in pairs {
        if let (Some(a), Some(b)) = (a, b) {
            if a > b {
                problems.push(format!("{at}: death rounds out of order ({what})"));
            }
        }
    }
}

pub fn validate_csv(text: &str) -> Validation {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let mut v = Validation {
        kind: None,
        rows: 0,
        problems: Vec::new(),
    };
    if text.contains('\r') {
        v.problems.push("CRLF line endings".into());
    }
    let header: Vec<String> = match rdr.headers() {
        Ok(h) => h.iter().map(str::to_string).collect(),
        Err(e) => {
            v.problems.push(format!("unreadable header: {e}"));
            return v;
        }
    };
    v.kind = [
        (FileKind::Rounds, &ROUNDS_HEADER[..]),
        (FileKind::Runs, &RUNS_HEADER[..]),
        (FileKind::Table, &TABLE_HEADER[..]),
        (FileKind::Sweep, &SWEEP_HEADER[..]),
    ]
    .into_iter()
    .find(|(_, h)| header.iter().map(String::as_str).eq(h.iter().copied()))
    .map(|(k, _)| k);
    let Some(kind) = v.kind else {
        v.problems.push(format!("unrecognized header {header:?}"));
        return v;
    };

    let mut prev: Option<(u64, u64, f64, u64)> = None;
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = match rec {
            Ok(r) => r,
            Err(e) => {
                v.problems.push(format!("line {line}: {e}"));
                continue;
            }
        };
        v.rows += 1;
        match kind {
            FileKind::Rounds => {
                let parsed = (|| {
                    Some((
                        rec.get(0)?.parse::<u64>().ok()?,
                        rec.get(1)?.parse::<u64>().ok()?,
                        rec.get(2)?.parse::<f64>().ok()?,
                        rec.get(3)?.parse::<u64>().ok()?,
                    ))
                })();
                let Some(cur) = parsed else {
                    v.problems.push(format!("line {line}: unparsable row"));
                    continue;
                };
                if let Some(p) = prev {
                    if cur.0 != p.0 + 1 {
                        v.problems.push(format!("line {line}: round {} does not follow {}", cur.0, p.0));
                    }
                    if cur.1 > p.1 {
                        v.problems.push(format!("line {line}: alive count increased"));
                    }
                    if cur.2 > p.2 {
                        v.problems.push(format!("line {line}: residual energy increased"));
                    }
                    if cur.3 < p.3 {
                        v.problems.push(format!("line {line}: cumulative packets decreased"));
                    }
                }
                prev = Some(cur);
            }
            FileKind::Runs => {
                let opt = |i: usize| -> std::result::Result<Option<u64>, ()> {
                    match rec.get(i) {
                        Some("") => Ok(None),
                        Some(s) => s.parse().map(Some).map_err(|_| ()),
                        None => Err(()),
                    }
                };
                match (opt(1), opt(2), opt(3), opt(4), opt(5)) {
                    (Ok(Some(_)), Ok(f), Ok(h), Ok(l), Ok(Some(_))) => {
                        check_death_order(f, h, l, &format!("line {line}"), &mut v.problems)
                    }
                    _ => v.problems.push(format!("line {line}: unparsable row")),
                }
            }
            FileKind::Table | FileKind::Sweep => {
                let skip_last = usize::from(kind == FileKind::Sweep);
                for (j, cell) in rec.iter().enumerate().skip(1).take(rec.len().saturating_sub(1 + skip_last)) {
                    let ok = cell.is_empty() || cell.parse::<f64>().is_ok() || cell == "true" || cell == "false";
                    if !ok {
                        v.problems.push(format!("line {line}, column {}: `{cell}` is not numeric", j + 1));
                    }
                }
            }
            FileKind::Json => unreachable!(),
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn good_rounds_file_passes() {
        let text = "round,alive,residual_energy_j,cumulative_packets\n0,3,1.5e0,3\n1,2,1.4e0,5\n2,2,1.4e0,5\n";
        let v = validate_csv(text);
        assert_eq!(v.kind, Some(FileKind::Rounds));
        assert_eq!(v.rows, 3);
        assert!(v.ok(), "{:?}", v.problems);
    }

    #[test]
    fn non_monotone_columns_fail() {
        let text = "round,alive,residual_energy_j,cumulative_packets\n0,3,1.5e0,3\n1,4,1.6e0,2\n3,4,1.6e0,2\n";
        let v = validate_csv(text);
        assert_eq!(v.problems.len(), 4, "{:?}", v.problems);
    }

    #[test]
    fn unknown_header_fails() {
        assert!(!validate_csv("a,b\n1,2\n").ok());
    }

    #[test]
    fn runs_file_checks_death_order() {
        let good = "scenario,seed,first_death,half_death,last_death,total_packets\nsep,0,10,20,,100\n";
        assert!(validate_csv(good).ok());
        let bad = "scenario,seed,first_death,half_death,last_death,total_packets\nsep,0,30,20,40,100\n";
        assert!(!validate_csv(bad).ok());
    }

    #[test]
    fn json_is_parsed() {
        assert!(validate_json("{\"a\": 1}").ok());
        assert!(!validate_json("{").ok());
    }
}
