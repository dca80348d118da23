use thiserror::Error;

pub type Result<T> = std::result::Result<T, DtError>;

#[derive(Debug, Error)]
pub enum DtError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("q = {0} exceeds the table cap 2^20")]
    FieldTooLarge(u64),
    #[error("extension degree must be >= 1")]
    BadDegree,
    #[error("element index {idx} out of range for q = {q}")]
    BadElement { idx: u64, q: u64 },
    #[error("division or logarithm of zero")]
    ZeroArgument,
    #[error("d = {d} does not divide q - 1 = {qm1}")]
    BadSubgroupOrder { d: u64, qm1: u64 },
    #[error("twist {m} is not a unit modulo d = {d}")]
    BadTwist { m: u64, d: u64 },
    #[error("lambda must be nonzero")]
    ZeroShift,
    #[error("{0}")]
    Domain(String),
    #[error("set contains a repeated or invalid entry: {0}")]
    BadSet(String),
    #[error("polynomial degree {deg} exceeds cap {cap}")]
    DegreeCap { deg: usize, cap: usize },
    #[error("polynomial is a {d}-th power, Weil precondition violated")]
    PerfectPower { d: u64 },
    #[error(
        "binomial condition fails: carry at base-{p} digit {position} adding {m} and {n}"
    )]
    Inapplicable { p: u64, position: u32, m: u64, n: u64 },
    #[error("hypothesis violated: ({a} * {b} + lambda) is not a d-th power or zero")]
    HypothesisViolated { a: u64, b: u64 },
    #[error("graph has {0} vertices, above the exact-search cap {1}")]
    GraphTooLarge(usize, usize),
    #[error("k = {0} out of supported range")]
    BadK(u64),
    #[error("search ceiling or size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("q = {0} is not a square")]
    NotSquare(u64),
    #[error("no verified construction within the enumeration budget")]
    ConstructionFailed,
    #[error("unknown golden table id: {0}")]
    UnknownTable(String),
    #[error("golden data checksum mismatch for {0}: transcription edited without update")]
    ChecksumMismatch(&'static str),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
