use std::fmt;

use thiserror::Error;

/// Where in an input file a parse problem was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    /// 1-based line of an edge-list file.
    Line(usize),
    /// 1-based position inside the `edges` array of a JSON graph file.
    EdgeEntry(usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Line(l) => write!(f, "line {l}"),
            Location::EdgeEntry(i) => write!(f, "edge entry {i}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{at}: malformed input: {message}")]
    Malformed { at: Location, message: String },

    #[error("{at}: node id {node} out of range (graph has {num_nodes} nodes)")]
    NodeIdOutOfRange {
        at: Location,
        node: usize,
        num_nodes: usize,
    },

    #[error("{at}: self-loop on node {node}")]
    SelfLoop { at: Location, node: usize },

    #[error("{at}: duplicate edge ({u}, {v})")]
    DuplicateEdge { at: Location, u: usize, v: usize },

    #[error("node {node} out of range (graph has {num_nodes} nodes)")]
    InvalidNode { node: usize, num_nodes: usize },

    #[error("({u}, {v}) is not an edge")]
    NotAnEdge { u: usize, v: usize },

    #[error("graph with {nodes} nodes exceeds the brute-force bound of {limit}")]
    SizeLimit { nodes: usize, limit: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid node features: {0}")]
    InvalidFeatures(String),

    #[error("subgraph is disconnected; shortest-path matrix would be infinite")]
    Disconnected,

    #[error("invalid path matrix: {0}")]
    InvalidPathMatrix(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("transportation solver failed: {0}")]
    Transport(String),

    #[error("descriptor failed on edge ({u}, {v}): {source}")]
    Descriptor {
        u: usize,
        v: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("missing coefficient for edge ({u}, {v})")]
    MissingCoefficient { u: usize, v: usize },

    #[error("node {0} is isolated; nothing to normalize over")]
    IsolatedNode(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("empty dataset")]
    EmptyDataset,

    #[error("label {0} outside {{0, 1}}")]
    InvalidLabel(i64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for problems with the input itself: unreadable, malformed or
    /// invalid graph files.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Malformed { .. }
                | Error::NodeIdOutOfRange { .. }
                | Error::SelfLoop { .. }
                | Error::DuplicateEdge { .. }
                | Error::InvalidFeatures(_)
                | Error::Io(_)
                | Error::Json(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
