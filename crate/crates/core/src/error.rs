use thiserror::Error;

/// Errors raised by the tropical algebra, variety and curve routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the bottom element -inf has no multiplicative inverse")]
    InversionOfBottom,
    #[error("cannot invert the -inf element of the rational function semifield")]
    BottomInverse,
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable x{index} is out of range for {n_vars} variable(s)")]
    VarOutOfRange { index: usize, n_vars: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cell enumeration supports at most 3 variables, got {0}")]
    DimensionTooLarge(usize),
    #[error("sampling grid has {0} points, more than the 10^7 limit")]
    BoxTooLarge(u128),
    #[error("invalid sampling box: {0}")]
    InvalidBox(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid subgraph: {0}")]
    InvalidSubgraph(String),
    #[error("invalid rational function on the curve: {0}")]
    InvalidFunction(String),
    #[error("cannot negate the constant -inf function")]
    BottomNegation,
    #[error("the constant -inf function has no divisor")]
    BottomDivisor,
    #[error("theta is undefined at points at infinity")]
    InfinitePoint,
    #[error("expected a polynomial expression: {0}")]
    NotPolynomial(String),
    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
