use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("{what} too large: {size} exceeds cap {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("{0} is not a prime")]
    NotPrime(usize),
    #[error("index {index} out of range (size {size})")]
    BadIndex { index: usize, size: usize },
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("not a group-rack lattice: {0}")]
    NotGroupLattice(String),
    #[error("no lattice element with atom support {0:?}")]
    MissingElement(Vec<usize>),
    #[error("no hypothetical coset partition extends the given part")]
    NoPartition,
    #[error("isomorphism search exceeded {0} backtrack nodes")]
    Timeout(u64),
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown group name `{0}`")]
    UnknownGroup(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
