use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by construction and evaluation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("grid mismatch between {0}")]
    GridMismatch(&'static str),

    #[error("degenerate facet {index}: {reason}")]
    DegenerateFacet { index: usize, reason: String },

    #[error("invalid facet {index}: {reason}")]
    InvalidFacet { index: usize, reason: String },

    #[error("{name} = {value} is out of range: {expected}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("sets must be disjoint ({0} shared cells)")]
    NotDisjoint(usize),

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("transition width of eps = {eps} is not resolvable on this grid (smallest usable eps is {min_eps})")]
    Unresolvable { eps: f64, min_eps: f64 },

    #[error("zone {zone}: {condition}")]
    ZoneCondition { zone: usize, condition: String },

    #[error("atom {index} lies on interface facet {facet}")]
    AtomOnInterface { index: usize, facet: usize },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_range(name: &'static str, value: f64, ok: bool, expected: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            expected,
        })
    }
}
