use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("segment is not a rational multiple of an integer vector")]
    NotRationalDirection,
    #[error("invalid Markov triple ({0}, {1}, {2})")]
    InvalidTriple(BigInt, BigInt, BigInt),
    #[error("mutation index must be 1, 2 or 3, got {0}")]
    BadMutationIndex(usize),
    #[error("depth {depth} exceeds the bound {bound}")]
    DepthOverBound { depth: usize, bound: usize },
    #[error("{p} not found in the Markov tree within depth {depth}")]
    NotFound { p: BigInt, depth: usize },
    #[error("({p}, {q}) is not a Markov number with a companion")]
    InvalidPair { p: BigInt, q: BigInt },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("no culet found for ({p}, {q})")]
    NoCulet { p: BigInt, q: BigInt },
    #[error("several culet candidates for ({p}, {q})")]
    MultipleCulets { p: BigInt, q: BigInt },
    #[error("{p1} and {p2} do not appear in a common Markov triple")]
    NoCommonTriple { p1: BigInt, p2: BigInt },
    #[error("companion {q} does not match {p} in the triple")]
    CompanionMismatch { p: BigInt, q: BigInt },
    #[error("sizes must be positive")]
    NonPositive,
    #[error("pavilion cut {0} meets the girdle")]
    GirdleViolated(usize),
    #[error("pavilion edge {0} degenerates")]
    NotDelzant(usize),
    #[error("invalid blow-up site")]
    InvalidSite,
    #[error("no attach position for chain {0:?}")]
    NoPosition(Vec<i64>),
    #[error("several attach positions for chain {0:?}: {1:?}")]
    MultiplePositions(Vec<i64>, Vec<usize>),
    #[error("index {0} is not an inner corner")]
    InvalidIndex(i64),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
