use thiserror::Error;

use crate::diagram::Condition;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("empty diagram unsupported")]
    EmptyDiagram,

    #[error("{field} has {found} entries, expected {expected}")]
    Length {
        field: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{field}[{index}] = {value} is outside [0, {bound})")]
    OutOfRange {
        field: &'static str,
        index: usize,
        value: usize,
        bound: usize,
    },

    #[error("diagram violates {condition}: {msg}")]
    Invalid { condition: Condition, msg: String },

    #[error("triple point {id} does not exist (diagram has {q})")]
    NoSuchTriplePoint { id: usize, q: usize },

    #[error("representation error: {0}")]
    Rep(String),

    #[error("lifted diagram failed {claim}: {msg}")]
    Lift { claim: &'static str, msg: String },

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("unknown assumption tag `{0}`")]
    UnknownAssumption(String),

    #[error("genus {genus} is outside the table (length {len})")]
    TableIndex { genus: usize, len: usize },

    #[error("{0}")]
    Unsupported(String),

    #[error("certificate entries overflow i64")]
    Overflow,
}
