use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDist(String),
    #[error("symbol {symbol} is outside an alphabet of size {size}")]
    SymbolOutOfRange { symbol: u32, size: usize },
    #[error("unknown state {0}")]
    UnknownState(usize),
    #[error("Kraft sum {0} exceeds 1, no prefix code with these lengths exists")]
    KraftInfeasible(String),
    #[error("code is not prefix-free: {0}")]
    NotPrefixFree(String),
    #[error("code is not exhaustive: codewords carry total mass {0}")]
    NotExhaustive(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("protocol is unproductive: no iteration emits a symbol")]
    Unproductive,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("serial chain has no components")]
    EmptyChain,
    #[error("insufficient trials: need at least {need}, got {got}")]
    InsufficientTrials { need: u64, got: u64 },
    #[error("input distribution has zero entropy")]
    DegenerateInput,
}
