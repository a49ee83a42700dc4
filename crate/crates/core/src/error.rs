use std::fmt;
use std::io;

/// Everything that can go wrong between reading an edge list and producing
/// a replacement table. Parse variants carry the 1-based input line.
#[derive(Debug)]
pub enum Error {
    /// Header line is missing or is not two integers `n m`.
    BadHeader { line: usize, detail: String },
    /// An edge line does not have the form `u v w`.
    BadEdgeLine { line: usize, detail: String },
    /// An endpoint is not in `[0, n)`.
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    /// A weight literal is not an integer (floats are rejected here).
    BadWeight { line: usize, token: String },
    /// A weight literal is an integer but does not fit the weight scalar.
    WeightOverflow { line: usize, token: String },
    /// Fewer or more edge lines than the header promised.
    EdgeCountMismatch { line: usize, expected: usize, found: usize },
    /// The graph does not span all vertices from vertex 0.
    NotConnected,
    /// Zero vertices: there is nothing to analyze.
    EmptyGraph,
    /// Summing tree weights overflowed the weight scalar.
    WeightSumOverflow,
    /// A generator was asked for an impossible (family, n, m) combination.
    Infeasible(String),
    Io(io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::BadHeader { line, detail } => {
                write!(f, "line {line}: bad header: {detail}")
            }
            Error::BadEdgeLine { line, detail } => {
                write!(f, "line {line}: bad edge line: {detail}")
            }
            Error::VertexOutOfRange { line, vertex, n } => {
                write!(f, "line {line}: vertex {vertex} out of range (n = {n})")
            }
            Error::BadWeight { line, token } => {
                write!(f, "line {line}: weight {token:?} is not an integer")
            }
            Error::WeightOverflow { line, token } => {
                write!(f, "line {line}: weight {token} does not fit the weight type")
            }
            Error::EdgeCountMismatch { line, expected, found } => {
                write!(f, "line {line}: expected {expected} edges, found {found}")
            }
            Error::NotConnected => write!(f, "graph is not connected"),
            Error::EmptyGraph => write!(f, "graph has no vertices"),
            Error::WeightSumOverflow => write!(f, "tree weight sum overflows the weight type"),
            Error::Infeasible(msg) => write!(f, "infeasible generator request: {msg}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(e: io::Error) -> Self {
        Error::Io(e)
    }
}
