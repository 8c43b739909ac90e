use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the zero polynomial has no degree or valuation")]
    ZeroPolynomial,
    #[error("truncated series lost every significant term")]
    PrecisionLoss,
    #[error("operation not supported: {0}")]
    Unsupported(&'static str),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("node {node} out of range 1..={rank}")]
    NodeOutOfRange { node: usize, rank: usize },
    #[error("exchange matrix is not skew-symmetrizable")]
    NotSkewSymmetrizable,
    #[error("invalid Grassmannian parameters k={k}, n={n}")]
    InvalidContext { k: usize, n: usize },
    #[error("map {0} is not available here")]
    InvalidMap(String),
    #[error("singular pivot: {0}")]
    SingularPivot(String),
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("negative literal at byte {offset}")]
    NegativeLiteral { offset: usize },
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("not a semistandard tableau: {0}")]
    NotSemistandard(String),
    #[error("tableau is not a factor")]
    NotAFactor,
    #[error("tableau has a frozen factor")]
    HasFrozenFactor,
    #[error("degree cap {cap} is below the requested range {r_max}")]
    CapTooSmall { cap: usize, r_max: usize },
    #[error("orbit search reached the word length cap {0}")]
    WordCapHit(usize),
    #[error("fixture: {0}")]
    Fixture(String),
}

pub type Result<T> = std::result::Result<T, Error>;
