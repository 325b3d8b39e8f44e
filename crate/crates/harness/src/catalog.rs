//! Line-delimited JSON result catalog.
//!
//! Every line is one self-contained [`CatalogRecord`]. Files are only ever
//! appended to. The `meta` field (wall-clock timestamp and elapsed time) is
//! the only part of a record allowed to differ between two runs of the same
//! engine version, and [`CatalogRecord::canonical_line`] drops it.

use crate::error::{io_error, HarnessError, Result};
use serde::{Deserialize, Serialize};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

pub const SCHEMA_VERSION: u32 = 1;
pub const ENGINE_VERSION: &str = concat!("itersum-", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    Classification,
    Verdict,
    Witness,
    Constant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
    /// A node or time budget ran out before a verdict.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RecordKey {
    pub group: String,
    pub input: String,
    pub params: String,
}

impl RecordKey {
    pub fn new(group: impl ToString, input: impl Into<String>, params: impl Into<String>) -> Self {
        RecordKey {
            group: group.to_string(),
            input: input.into(),
            params: params.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordMeta {
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub elapsed_us: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub schema: u32,
    pub kind: RecordKind,
    pub key: RecordKey,
    pub status: Status,
    pub payload: serde_json::Value,
    pub engine_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<RecordMeta>,
}

impl CatalogRecord {
    pub fn new(kind: RecordKind, key: RecordKey, status: Status, payload: impl Serialize) -> Self {
        CatalogRecord {
            schema: SCHEMA_VERSION,
            kind,
            key,
            status,
            payload: serde_json::to_value(payload).expect("payload serializes"),
            engine_version: ENGINE_VERSION.to_string(),
            meta: None,
        }
    }

    pub fn with_elapsed(mut self, elapsed: Duration) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        self.meta = Some(RecordMeta {
            timestamp,
            elapsed_us: elapsed.as_micros() as u64,
        });
        self
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    /// The record without `meta`; equal across reruns.
    pub fn canonical_line(&self) -> String {
        let mut bare = self.clone();
        bare.meta = None;
        bare.to_line()
    }

    pub fn parse_line(line: &str) -> std::result::Result<CatalogRecord, String> {
        let rec: CatalogRecord = serde_json::from_str(line).map_err(|e| e.to_string())?;
        rec.validate()?;
        Ok(rec)
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if self.schema != SCHEMA_VERSION {
            return Err(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                self.schema
            ));
        }
        if self.engine_version.is_empty() {
            return Err("empty engine_version".into());
        }
        itersum::parse_group(&self.key.group)
            .map_err(|e| format!("bad group literal '{}': {e}", self.key.group))?;
        Ok(())
    }
}

/// Appends records to a catalog file, creating it if needed.
pub struct CatalogWriter {
    path: PathBuf,
    out: BufWriter<File>,
}

impl CatalogWriter {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(io_error(format!("creating {}", dir.display())))?;
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(io_error(format!("opening {}", path.display())))?;
        Ok(CatalogWriter {
            path,
            out: BufWriter::new(file),
        })
    }

    pub fn append(&mut self, record: &CatalogRecord) -> Result<()> {
        writeln!(self.out, "{}", record.to_line())
            .map_err(io_error(format!("writing {}", self.path.display())))
    }

    pub fn finish(mut self) -> Result<()> {
        self.out
            .flush()
            .map_err(io_error(format!("writing {}", self.path.display())))
    }
}

pub fn append_records(path: impl AsRef<Path>, records: &[CatalogRecord]) -> Result<()> {
    let mut w = CatalogWriter::open(path)?;
    for r in records {
        w.append(r)?;
    }
    w.finish()
}

/// Reads every record, rejecting the first malformed line with its
/// 1-based line number. Blank lines are skipped.
pub fn read_catalog(path: impl AsRef<Path>) -> Result<Vec<CatalogRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(io_error(format!("opening {}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_error(format!("reading {}", path.display())))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = CatalogRecord::parse_line(&line).map_err(|message| HarnessError::Catalog {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        })?;
        out.push(rec);
    }
    Ok(out)
}

/// Canonical lines of `records`, sorted.
pub fn sorted_canonical(records: &[CatalogRecord]) -> Vec<String> {
    let mut lines: Vec<String> = records.iter().map(CatalogRecord::canonical_line).collect();
    lines.sort();
    lines
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn rec(i: usize, kind: RecordKind) -> CatalogRecord {
        CatalogRecord::new(
            kind,
            RecordKey::new("C4", format!("{{{i}}}"), "n=3"),
            Status::Pass,
            json!({ "value": i }),
        )
        .with_elapsed(Duration::from_millis(i as u64))
    }

    #[test]
    fn round_trip_keeps_order() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let kinds = [RecordKind::Verdict, RecordKind::Classification, RecordKind::Witness];
        let records: Vec<_> = (0..6).map(|i| rec(i, kinds[i % 3])).collect();
        append_records(&path, &records[..3]).unwrap();
        append_records(&path, &records[3..]).unwrap();
        assert_eq!(read_catalog(&path).unwrap(), records);
    }

    #[test]
    fn malformed_line_is_located() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        append_records(&path, &[rec(0, RecordKind::Verdict), rec(1, RecordKind::Verdict)]).unwrap();
        let mut text = std::fs::read_to_string(&path).unwrap();
        text.push_str("{\"schema\": 1, \"kind\": \n");
        std::fs::write(&path, text).unwrap();
        match read_catalog(&path) {
            Err(HarnessError::Catalog { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let mut bad = rec(0, RecordKind::Constant);
        bad.schema = 7;
        std::fs::write(&path, bad.to_line()).unwrap();
        assert!(matches!(read_catalog(&path), Err(HarnessError::Catalog { line: 1, .. })));
    }

    #[test]
    fn canonical_ignores_meta() {
        let a = rec(2, RecordKind::Verdict);
        let mut b = a.clone();
        b.meta = Some(RecordMeta {
            timestamp: 1,
            elapsed_us: 99,
        });
        assert_ne!(a.to_line(), b.to_line());
        assert_eq!(a.canonical_line(), b.canonical_line());
    }
}
