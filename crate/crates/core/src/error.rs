use thiserror::Error;

use crate::series::{Symbol, Truncation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("truncation mismatch: {left:?} vs {right:?}")]
    TruncationMismatch { left: Truncation, right: Truncation },

    #[error("replacement for {symbol} has a term outside the target truncation: {term}")]
    ReplacementOutOfBounds { symbol: Symbol, term: String },

    #[error("series is not nilpotent under its truncation (exp/log did not terminate)")]
    NotNilpotent,

    #[error("log requires constant term 1, found {0}")]
    NonUnitConstant(String),

    #[error("operator exponential may not terminate: atom `{0}` gains nothing in any bounded grading")]
    NonTerminating(String),

    #[error("operator is not in class {class}: atom `{atom}`")]
    ClassMembership { class: &'static str, atom: String },

    #[error("exact division by (x+y) left remainder {0}")]
    NotDivisible(String),

    #[error("invalid pairing: {0}")]
    InvalidPairing(String),

    #[error("substitution overflows the budget: {0}")]
    BudgetOverflow(String),

    #[error("round trip mismatch: {0}")]
    RoundTrip(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
