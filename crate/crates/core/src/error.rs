use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("pairing of two sequences with non-vanishing tails is not summable")]
    NonSummable,

    #[error("norm is infinite: {0}")]
    InfiniteNorm(&'static str),

    #[error("tail combination cannot be represented: {0}")]
    UnrepresentableTail(&'static str),

    #[error("sequence must be finitely supported (zero tail)")]
    NotFinitelySupported,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("grid function is improper: no finite value")]
    Improper,

    #[error("grid function takes the value -inf at node {0}")]
    NegativeInfinity(usize),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("incompatible grids: {0}")]
    GridMismatch(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("f dips below q_L by {amount:e} at node {node}")]
    DominationViolated { node: usize, amount: f64 },

    #[error("element is not in the domain: {0}")]
    NotInDomain(String),

    #[error("operator graph is empty")]
    EmptyGraph,

    #[error("image lies outside the canonical image of E at coordinate {coordinate}")]
    OutsideCanonicalImage { coordinate: usize },

    #[error("linear system is singular beyond tolerance")]
    Singular,

    #[error("operation not supported for this representation: {0}")]
    Unsupported(String),

    #[error("inner solve could not reach eps^2 = {target:e} at level {level} (best {best:e})")]
    InnerSolveFailed {
        level: usize,
        target: f64,
        best: f64,
    },

    #[error("search exhausted without success: {0}")]
    SearchFailed(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
