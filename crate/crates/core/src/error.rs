use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("loop arc at vertex {0}")]
    LoopArc(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("arc set is not a sub-multiset of the graph's arcs (pair {0}->{1})")]
    NotASubset(usize, usize),
    #[error("reversed and removed arc sets overlap on pair {0}->{1}")]
    OverlappingArcSets(usize, usize),
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("graph is not Eulerian")]
    NotEulerian,
    #[error("graph is not bidirected")]
    NotBidirected,
    #[error("dimension mismatch: expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Laplacian image has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("no stable or repeated state within {0} firings")]
    StepLimitExceeded(u64),
    #[error("chip count overflowed 64-bit range")]
    ChipOverflow,
    #[error("{what}: size {actual} exceeds limit {limit}")]
    SizeLimitExceeded {
        what: &'static str,
        limit: u64,
        actual: u64,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid distribution literal {0:?}")]
    BadDistribution(String),
}
