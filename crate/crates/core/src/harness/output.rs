use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::fit::FitResult;
use super::sweep::SweepRecord;
use crate::error::{Error, Result};
use crate::geometry::Grid;

pub const CSV_COLUMNS: [&str; 7] = ["eps", "term1", "term2", "term3", "total", "mass_over_ln", "L1_defect"];

pub const DETERMINISM_NOTE: &str =
    "no random seeds are used; values are independent of thread count and tile size";

#[derive(Debug, Serialize)]
struct ResultsJson<'a> {
    tool: &'static str,
    version: &'static str,
    determinism: &'static str,
    ladder: Vec<f64>,
    grid_ids: Vec<&'a str>,
    fits: &'a BTreeMap<String, FitResult>,
    config: &'a serde_json::Value,
}

/// Paths written by [`emit_results`].
#[derive(Debug, Clone, PartialEq)]
pub struct EmittedFiles {
    pub csv: PathBuf,
    pub json: PathBuf,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `<stem>.csv` (one row per record, fixed columns) and
/// `<stem>.json` (fits, ladder, config echo) into `dir`.
pub fn emit_results(
    records: &[SweepRecord],
    fits: &BTreeMap<String, FitResult>,
    config: &serde_json::Value,
    dir: &Path,
    stem: &str,
) -> Result<EmittedFiles> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let csv_path = dir.join(format!("{stem}.csv"));
    let mut wtr = csv::Writer::from_path(&csv_path).map_err(|source| Error::Csv {
        path: csv_path.clone(),
        source,
    })?;
    let csv_err = |source| Error::Csv {
        path: csv_path.clone(),
        source,
    };
    wtr.write_record(CSV_COLUMNS).map_err(csv_err)?;
    for r in records {
        let row = [
            r.eps,
            r.energy.potential,
            r.energy.nonlocal,
            r.energy.surfactant,
            r.energy.total,
            r.mass_over_log,
            r.l1_defect,
        ];
        wtr.write_record(row.iter().map(|v| format!("{v:e}"))).map_err(csv_err)?;
    }
    wtr.flush().map_err(io_err(&csv_path))?;

    let json_path = dir.join(format!("{stem}.json"));
    let doc = ResultsJson {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        determinism: DETERMINISM_NOTE,
        ladder: records.iter().map(|r| r.eps).collect(),
        grid_ids: records.iter().map(|r| r.grid_id.as_str()).collect(),
        fits,
        config,
    };
    let text = serde_json::to_string_pretty(&doc).map_err(|source| Error::Json {
        path: json_path.clone(),
        source,
    })?;
    fs::write(&json_path, text + "\n").map_err(io_err(&json_path))?;
    Ok(EmittedFiles {
        csv: csv_path,
        json: json_path,
    })
}

/// Magic bytes of a field dump.
pub const DUMP_MAGIC: &[u8; 4] = b"NLPD";
pub const DUMP_VERSION: u32 = 1;

/// Writes a per-cell field as little-endian binary: magic, `u32` version,
/// `u32` dimension, `u64` cells, `f64` origin and `f64` extent per axis,
/// then the values in row-major order (last axis fastest).
pub fn write_field_dump(path: &Path, grid: &Grid, values: &[f64]) -> Result<()> {
    if values.len() != grid.len() {
        return Err(Error::GridMismatch("dump values and grid"));
    }
    let dim = grid.dim();
    let mut buf = Vec::with_capacity(12 + dim * 24 + values.len() * 8);
    buf.extend_from_slice(DUMP_MAGIC);
    buf.extend_from_slice(&DUMP_VERSION.to_le_bytes());
    buf.extend_from_slice(&(dim as u32).to_le_bytes());
    for &n in &grid.cells()[..dim] {
        buf.extend_from_slice(&(n as u64).to_le_bytes());
    }
    for &o in &grid.origin()[..dim] {
        buf.extend_from_slice(&o.to_le_bytes());
    }
    for &e in &grid.extent()[..dim] {
        buf.extend_from_slice(&e.to_le_bytes());
    }
    for v in values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io_err(parent))?;
    }
    fs::write(path, buf).map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_records_give_header_only() {
        let dir = std::env::temp_dir().join(format!("nlphase-emit-{}", std::process::id()));
        let files = emit_results(&[], &BTreeMap::new(), &serde_json::Value::Null, &dir, "empty").unwrap();
        let text = fs::read_to_string(&files.csv).unwrap();
        assert_eq!(text, "eps,term1,term2,term3,total,mass_over_ln,L1_defect\n");
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn unwritable_path_is_named() {
        let err = emit_results(&[], &BTreeMap::new(), &serde_json::Value::Null, Path::new("/proc/nlphase/x"), "r").unwrap_err();
        assert!(err.to_string().contains("/proc/nlphase/x"), "{err}");
    }

    #[test]
    fn dump_layout() {
        let grid = Grid::new(&[0.0, -1.0], &[2.0, 1.0], &[3, 2]).unwrap();
        let path = std::env::temp_dir().join(format!("nlphase-dump-{}.bin", std::process::id()));
        let values: Vec<f64> = (0..6).map(f64::from).collect();
        write_field_dump(&path, &grid, &values).unwrap();
        let bytes = fs::read(&path).unwrap();
        fs::remove_file(&path).unwrap();
        assert_eq!(&bytes[..4], DUMP_MAGIC);
        assert_eq!(bytes.len(), 12 + 2 * 24 + 6 * 8);
        assert_eq!(u64::from_le_bytes(bytes[12..20].try_into().unwrap()), 3);
        assert_eq!(f64::from_le_bytes(bytes[28..36].try_into().unwrap()), 0.0);
        assert_eq!(f64::from_le_bytes(bytes[bytes.len() - 8..].try_into().unwrap()), 5.0);
        assert!(write_field_dump(&path, &grid, &values[..3]).is_err());
    }
}
