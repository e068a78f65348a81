use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("group kind mismatch: {0} vs {1}")]
    KindMismatch(String, String),
    #[error("invalid group descriptor: {0}")]
    InvalidGroup(String),
    #[error("group {0} is not finite")]
    NotFinite(String),
    #[error("invalid character label {label} for group {group}")]
    InvalidLabel { group: String, label: String },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("letter {position} does not start where the previous letter ends")]
    NotComposable { position: usize },
    #[error("cannot compose: source of the outer path differs from range of the inner path")]
    EndpointMismatch,
    #[error("not an edge: {0}")]
    NotAnEdge(String),
    #[error("edges are not independent: {0}")]
    NotIndependent(String),

    #[error("path does not lie in the subgroupoid")]
    PathOutsideSubgroupoid,
    #[error("subgroupoids are not comparable")]
    NotComparable,
    #[error("family does not contain the subgroupoid generated by the single atoms")]
    MissingTop,
    #[error("chart has {found} values, expected {expected}")]
    ChartArity { expected: usize, found: usize },

    #[error("expression arity mismatch: {0}")]
    Arity(String),
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("exact evaluation needs {size} points, limit is {limit}")]
    TooLargeForExact { size: u128, limit: u128 },
    #[error("invalid integration method: {0}")]
    InvalidMethod(String),
    #[error("no table for subgroupoid in the measure family")]
    MissingMeasureLevel,

    #[error("path is not closed")]
    NotClosed,
    #[error("transformation does not match the alphabet: {0}")]
    AlphabetMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
