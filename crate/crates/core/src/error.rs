use std::path::PathBuf;

use thiserror::Error;

use crate::generators::{AlgorithmId, OutputKind};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{algo} cannot produce {kind} output")]
    UnsupportedOutput { algo: AlgorithmId, kind: OutputKind },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: length {len} bytes is not a multiple of the {record}-byte record size")]
    TruncatedFile {
        path: PathBuf,
        len: u64,
        record: u64,
    },

    #[error("source exhausted after {consumed} values")]
    Exhausted { consumed: u64 },

    #[error("value kind mismatch: expected {expected}, found {found}")]
    KindMismatch {
        expected: OutputKind,
        found: OutputKind,
    },

    #[error("{test}: insufficient data ({detail})")]
    InsufficientData { test: String, detail: String },

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown golden vector: {0}")]
    UnknownVector(String),

    #[error("energy counters unsupported: {0}")]
    EnergyUnsupported(String),

    #[error("permission denied reading {path}: RAPL counters usually need root (try `sudo chmod o+r {path}`)")]
    PermissionDenied { path: PathBuf },

    #[error("workload failed: {0}")]
    Workload(String),

    #[error("parse error in {what}: {detail}")]
    Parse { what: String, detail: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
