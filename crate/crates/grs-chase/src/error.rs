use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid code parameters: {0}")]
    InvalidCode(String),
    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero polynomial pair has no leading monomial")]
    ZeroPair,
    #[error("locator {0} is not a root of the locator polynomial")]
    NotARoot(usize),
    #[error("locator polynomial has a repeated root at position {0}")]
    RepeatedRoot(usize),
    #[error("degree bound exceeded: {0}")]
    DegreeBound(String),
    #[error("invalid chase configuration: {0}")]
    InvalidConfig(String),
    #[error("oracle refused: {0}")]
    OracleCap(String),
}

pub type Result<T> = std::result::Result<T, Error>;
