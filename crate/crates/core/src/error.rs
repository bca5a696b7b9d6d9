// SPDX-License-Identifier: MIT OR Apache-2.0

use std::path::PathBuf;

/// Errors produced by loading, embedding, searching and evaluating.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Csv(#[from] csv::Error),

    #[error("{0}")]
    Json(#[from] serde_json::Error),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("schema error at line {line}: {message}")]
    Schema { line: usize, message: String },

    #[error("parse error at line {line}, column {column}: cannot read {cell:?} as a number")]
    Parse {
        line: usize,
        column: usize,
        cell: String,
    },

    #[error("non-finite value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("zero variance: {0}")]
    ZeroVariance(String),

    #[error("zero-norm rows under the cosine kernel: {rows:?}")]
    DegenerateRows { rows: Vec<usize> },

    #[error("invalid segment [{start}, {end})")]
    Interval { start: usize, end: usize },

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("window width {width} needs at least {needed} samples, got {len}")]
    Window {
        width: usize,
        needed: usize,
        len: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Broad failure class, used by front ends to pick an exit status.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Io { .. }
            | Error::Csv(_)
            | Error::Json(_)
            | Error::EmptyInput(_)
            | Error::Schema { .. }
            | Error::Parse { .. }
            | Error::NonFinite { .. }
            | Error::LengthMismatch { .. } => ErrorKind::Input,
            Error::ZeroVariance(_) | Error::DegenerateRows { .. } => ErrorKind::Numerical,
            Error::Interval { .. }
            | Error::Infeasible(_)
            | Error::Window { .. }
            | Error::InvalidParameter(_) => ErrorKind::Parameters,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// Unreadable or malformed input files.
    Input,
    /// The data is numerically degenerate for the requested operation.
    Numerical,
    /// Parameters cannot be satisfied by the data.
    Parameters,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
