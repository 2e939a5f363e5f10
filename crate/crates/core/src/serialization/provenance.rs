//! Append-only element history: newline-delimited JSON records
//! `{"path", "kind", "t"}` with `t` in unix seconds.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::compare::ModelDelta;
use crate::metamodel::{ElementPath, EcoreModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChangeKind {
    Created,
    Modified,
    Deleted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProvenanceRecord {
    pub path: String,
    pub kind: ChangeKind,
    pub t: i64,
}

/// One record per delta entry: additions are created, deletions deleted and
/// each field change a modification.
pub fn provenance_records(delta: &ModelDelta, t: i64) -> Vec<ProvenanceRecord> {
    let rec = |p: &ElementPath, kind| ProvenanceRecord {
        path: p.to_string(),
        kind,
        t,
    };
    delta
        .additions
        .iter()
        .map(|p| rec(p, ChangeKind::Created))
        .chain(delta.deletions.iter().map(|p| rec(p, ChangeKind::Deleted)))
        .chain(delta.changes.iter().map(|c| rec(&c.path, ChangeKind::Modified)))
        .collect()
}

/// Appends the records for `delta` in a single write. Callers must ensure a
/// single writer per log file.
pub fn provenance_log_append(log_file: &Path, delta: &ModelDelta, t: i64) -> std::io::Result<usize> {
    let records = provenance_records(delta, t);
    let mut buf = String::new();
    for r in &records {
        buf.push_str(&serde_json::to_string(r).expect("record serializes"));
        buf.push('\n');
    }
    let mut f = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(log_file)?;
    f.write_all(buf.as_bytes())?;
    f.sync_data()?;
    Ok(records.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ElementAge {
    /// Seconds since the latest creation record; `None` when unknown.
    pub age: Option<i64>,
    /// Time of the latest modification record.
    pub last_modified: Option<i64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AgeReport {
    pub ages: BTreeMap<ElementPath, ElementAge>,
    /// One message per log line that could not be read.
    pub warnings: Vec<String>,
}

/// Ages of every element of `model` according to the log text.
pub fn element_ages_from_str(log: &str, model: &EcoreModel, now: i64) -> AgeReport {
    let mut created: BTreeMap<String, i64> = BTreeMap::new();
    let mut modified: BTreeMap<String, i64> = BTreeMap::new();
    let mut warnings = Vec::new();
    for (i, line) in log.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<ProvenanceRecord>(line) {
            Ok(r) => {
                let slot = match r.kind {
                    ChangeKind::Created => &mut created,
                    ChangeKind::Modified => &mut modified,
                    ChangeKind::Deleted => continue,
                };
                let e = slot.entry(r.path).or_insert(r.t);
                *e = (*e).max(r.t);
            }
            Err(e) => warnings.push(format!("line {}: skipped corrupt record: {e}", i + 1)),
        }
    }
    let ages = model
        .paths()
        .map(|p| {
            let key = p.to_string();
            let age = ElementAge {
                age: created.get(&key).map(|t| now - t),
                last_modified: modified.get(&key).copied(),
            };
            (p.clone(), age)
        })
        .collect();
    AgeReport { ages, warnings }
}

/// Reads the log file; a missing file counts as an empty log.
pub fn element_ages(log_file: &Path, model: &EcoreModel, now: i64) -> std::io::Result<AgeReport> {
    let text = match std::fs::read_to_string(log_file) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => String::new(),
        Err(e) => return Err(e),
    };
    Ok(element_ages_from_str(&text, model, now))
}
