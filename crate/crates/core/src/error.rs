use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime in [2, 2^31)")]
    NotPrime(u64),
    #[error("this operation requires an odd prime, got p = 2")]
    EvenPrime,
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("negative exponent in a non-Laurent ring")]
    NegativeExponent,
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a p^e-th power")]
    NotAPower(String),
    #[error("inexact division")]
    InexactDivision,
    #[error("colon by the zero ideal")]
    ZeroColon,
    #[error("Groebner basis budget of {0} S-pairs exceeded")]
    GroebnerBudget(usize),
    #[error("iteration budget of {0} steps exceeded")]
    IterationBudget(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("Cartier algebra is generated in several degrees {0:?}")]
    MixedDegrees(Vec<u32>),
    #[error("chart mismatch: {0}")]
    ChartMismatch(String),
    #[error("mesh incompatibility: {0}")]
    Mesh(String),
    #[error("empty input")]
    EmptyInput,
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("no bracketing interval found: {0}")]
    NoBracket(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
