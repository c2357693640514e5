use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid partition: {}", .0.join("; "))]
    InvalidPartition(Vec<String>),

    #[error("index {index} out of range (len {len})")]
    OutOfRange { index: usize, len: usize },

    #[error("graph is not complete with unit weights")]
    NotComplete,

    #[error("LP infeasible")]
    Infeasible,

    #[error("LP iteration limit reached after {0} pivots")]
    IterationLimit(usize),

    #[error("lazy separation did not converge within {0} rounds")]
    SeparationLimit(usize),

    #[error("invalid H = {h}: total measure {total} cannot reach it")]
    InvalidH { h: f64, total: f64 },

    #[error("finder contract violated: {0}")]
    FinderContract(String),

    #[error("aggregation potential not decreasing: {0}")]
    PotentialNotDecreasing(String),

    #[error("capacity exceeded: {leftover} non-terminal parts, capacity {capacity}")]
    Capacity { leftover: usize, capacity: usize },

    #[error("empty family: {0}")]
    EmptyFamily(String),

    #[error("instance too large for exhaustive search: n = {n}, limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("no feasible set: {0}")]
    NoFeasibleSet(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
