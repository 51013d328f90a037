use std::path::PathBuf;

use thiserror::Error;

use crate::graph::Weight;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("no edges remain after removing self-loops")]
    NoEdges,
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("vertex id {id} out of range for {n} vertices")]
    VertexOutOfRange { id: usize, n: usize },
    #[error("non-positive weight {weight}")]
    NonPositiveWeight { weight: Weight },
}

/// Failure while reading or parsing an input file.
#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl IoError {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        IoError::Parse { line, msg: msg.into() }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("part count must be at least 1")]
    ZeroParts,
    #[error("part count {k} exceeds vertex count {n}")]
    TooManyParts { k: usize, n: usize },
    #[error("vertex {vertex} assigned part {part}, but k = {k}")]
    PartOutOfRange { vertex: usize, part: usize, k: usize },
    #[error("partition has {got} entries, graph has {expected} vertices")]
    LengthMismatch { got: usize, expected: usize },
    #[error("balance is infeasible: {0}")]
    Infeasible(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// Raised by a rebalancing pass when no part is light enough to receive
/// vertices.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("no valid destination part below the deadzone threshold {threshold}")]
pub struct NoValidDestination {
    pub threshold: Weight,
}
