//! On-disk cache: one JSON object per line,
//! `{"orders":[n1,…,n6],"value":…,"abs_error":…,"config_hash":"…"}`
//! with the orders in canonical (descending, nonnegative) form.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub orders: [u16; 6],
    pub value: f64,
    pub abs_error: f64,
    pub config_hash: String,
}

pub fn write_cache_file(path: &Path, records: &[CacheRecord]) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let mut w = BufWriter::new(File::create(path)?);
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a cache file; blank lines are skipped, malformed ones reported
/// with their 1-based line number.
pub fn read_cache_file(path: &Path) -> Result<Vec<CacheRecord>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: CacheRecord =
            serde_json::from_str(&line).map_err(|e| Error::Parse { line: i + 1, message: e.to_string() })?;
        out.push(rec);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn malformed_line_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        std::fs::write(
            &path,
            "{\"orders\":[0,0,0,0,0,0],\"value\":0.3,\"abs_error\":1e-14,\"config_hash\":\"ab\"}\n\nnot json\n",
        )
        .unwrap();
        match read_cache_file(&path) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }
}
