//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by graph edits, scoring, sampling, and data ingestion.
#[derive(Debug, Error)]
pub enum Error {
    #[error("node index {index} out of range for a {n}-node graph")]
    NodeOutOfRange { index: usize, n: usize },

    #[error("self-edge {0}->{0} is not allowed")]
    SelfEdge(usize),

    #[error("edge {from}->{to} is not a valid addition (present or cycle-creating)")]
    InvalidAddition { from: usize, to: usize },

    #[error("edge {from}->{to} is not present")]
    EdgeAbsent { from: usize, to: usize },

    #[error("child {0} appears in its own parent set")]
    ChildInParents(usize),

    #[error("parent set of size {got} exceeds max_parents = {cap}")]
    TooManyParents { got: usize, cap: usize },

    #[error("alpha must be a positive finite number, got {0}")]
    InvalidAlpha(f64),

    #[error("dataset has no rows")]
    EmptyDataset,

    #[error("move {kind} {from}->{to} is illegal on the current graph")]
    IllegalMove {
        kind: &'static str,
        from: usize,
        to: usize,
    },

    #[error("a network needs at least 2 nodes to have any moves")]
    DegenerateNetwork,

    #[error("exact enumeration supports at most {cap} nodes, got {n}")]
    TooManyNodes { n: usize, cap: usize },

    #[error("trace has no records after burn-in")]
    EmptyTrace,

    #[error("{0}")]
    InvalidArgument(String),

    #[error("matrix shapes disagree: {left} vs {right} nodes")]
    ShapeMismatch { left: usize, right: usize },

    #[error("row {row} has {got} fields, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        got: usize,
    },

    #[error("file contains no data rows")]
    EmptyFile,

    #[error("column {name:?} takes a single value; a categorical variable needs at least 2 states")]
    ConstantColumn { name: String },

    #[error("missing value at row {row}, column {col}")]
    MissingValue { row: usize, col: usize },

    #[error("invalid conditional probability table: {0}")]
    InvalidCpt(String),

    #[error("invalid graph description: {0}")]
    InvalidGraph(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
