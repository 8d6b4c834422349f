use std::io;

use crate::view::NodeColor;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty graph")]
    EmptyGraph,

    #[error("node {node} is out of range (node count {node_count})")]
    NodeOutOfRange { node: usize, node_count: usize },

    #[error("cannot probe node {node}: it is {color:?}, only gray nodes are probeable")]
    NotGray { node: usize, color: NodeColor },

    #[error("infeasible probe sequence at position {position}: node {node} is {color:?}")]
    InfeasibleSequence { position: usize, node: usize, color: NodeColor },

    #[error("seed set is empty")]
    EmptySeedSet,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("size range [{low}, {high}] is empty after rounding")]
    EmptySizeRange { low: usize, high: usize },

    #[error("{metric} did not converge within {iterations} iterations (residual {residual:e})")]
    NonConvergence { metric: &'static str, iterations: usize, residual: f64 },

    #[error("exact search refused: {nodes} nodes with budget {budget} exceeds the cap of {max_nodes} nodes")]
    SizeCap { nodes: usize, budget: usize, max_nodes: usize },

    #[error("training failed: {0}")]
    Training(String),

    #[error("model file: {0}")]
    ModelFormat(String),

    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
