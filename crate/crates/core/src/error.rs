use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid topology parameters: {0}")]
    InvalidTopology(String),

    #[error("cannot parse topology id {0:?}")]
    ParseTopology(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("capacity vector has {actual} entries, topology has {expected} vertices")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("complete-graph arity requires 1 <= k <= n, got n = {n}, k = {k}")]
    InvalidArity { n: usize, k: usize },

    #[error("no evaluator for {pnuma} hosting {vnuma}")]
    UnsupportedPair { pnuma: String, vnuma: String },

    #[error("vNUMA topology {0} must be connected with at least two vertices")]
    UnsupportedVnuma(String),

    #[error("{what} is {actual}, limit is {limit}")]
    SizeLimit {
        what: &'static str,
        limit: u64,
        actual: u64,
    },

    #[error("capacity b{index} = {value} exceeds the maximum of {max}")]
    CapacityOutOfRange { index: usize, value: u64, max: u64 },

    #[error("arithmetic overflow while evaluating capacity")]
    Overflow,

    #[error("sequence is not sorted in non-decreasing order")]
    NotSorted,

    #[error("vertex {0} is not in the graph")]
    VertexOutOfRange(usize),

    #[error("resource {0:?} is demanded but not reported free")]
    MissingResource(String),

    #[error("resource {0:?} has zero demand")]
    ZeroDemand(String),

    #[error("flavor demands no resources")]
    EmptyDemand,

    #[error("component must give exactly one of \"nodes\" or \"capacities\"")]
    AmbiguousComponent,
}

pub type Result<T> = std::result::Result<T, Error>;
