use thiserror::Error;

/// Errors raised by the library. Each variant has a stable kebab-case code
/// (see [`Error::code`]) that the CLI forwards in its error documents.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty subset")]
    EmptySubset,
    #[error("point index {0} is out of range")]
    IndexOutOfRange(usize),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("space is not ultrametric (violating triple {witness:?})")]
    NotUltrametric { witness: (usize, usize, usize) },
    #[error("diametrical partition needs at least two points")]
    PartitionUndefined,
    #[error("tree is not representable: vertex {vertex}: {reason}")]
    NotRepresentable { vertex: usize, reason: String },
    #[error("the union-diameter Hausdorff shortcut requires two distinct balls")]
    EqualBalls,
    #[error("labeled mode on an unlabeled tree (vertex {0} has no label)")]
    UnlabeledTree(usize),
    #[error("family is not a ballean")]
    InvalidFamily(Box<crate::laminar::ValidationReport>),
    #[error("iteration depth {requested} exceeds the limit {limit}")]
    DepthLimit { requested: usize, limit: usize },
    #[error("malformed structure: {0}")]
    Structure(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptySubset => "empty-subset",
            Error::IndexOutOfRange(_) => "index-out-of-range",
            Error::UnknownPoint(_) => "unknown-point",
            Error::NotUltrametric { .. } => "not-ultrametric",
            Error::PartitionUndefined => "partition-undefined",
            Error::NotRepresentable { .. } => "not-representable",
            Error::EqualBalls => "equal-balls",
            Error::UnlabeledTree(_) => "unlabeled-tree",
            Error::InvalidFamily(_) => "invalid-family",
            Error::DepthLimit { .. } => "depth-limit",
            Error::Structure(_) => "malformed-structure",
            Error::Parse(_) => "parse-error",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
