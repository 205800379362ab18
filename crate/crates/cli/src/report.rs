use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

/// Machine-readable finding attached to a report. Any finding makes the
/// run exit with status 1.
#[derive(Debug, Clone, Serialize)]
pub struct Finding {
    pub kind: String,
    pub detail: String,
    pub value: f64,
    pub limit: f64,
}

impl From<qannulus::search::Finding> for Finding {
    fn from(f: qannulus::search::Finding) -> Self {
        Finding { kind: f.kind, detail: f.detail, value: f.value, limit: f.limit }
    }
}

impl From<&qannulus::estimate::Violation> for Finding {
    fn from(v: &qannulus::estimate::Violation) -> Self {
        Finding {
            kind: v.kind.clone(),
            detail: format!("trial {} (seed {})", v.index, v.seed),
            value: v.value,
            limit: v.limit,
        }
    }
}

/// Everything but `elapsed_ms` is a function of (command, config, seed).
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub config: Value,
    pub results: Value,
    pub findings: Vec<Finding>,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub elapsed_ms: u64,
}

/// Writes via a sibling temporary file and a rename, so readers never see
/// a partial report.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name =
        path.file_name().ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name"))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

pub fn write_json(path: &Path, report: &Report) -> io::Result<()> {
    let mut bytes = serde_json::to_vec_pretty(report).map_err(io::Error::other)?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(io::Error::other)?;
    }
    let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
    write_atomic(path, &bytes)
}
