use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("pole: denominator vanishes at the evaluation point")]
    Pole,
    #[error("variable `{0}` has no assigned value")]
    Unassigned(&'static str),
    #[error("Gamma pole at {0}")]
    GammaPole(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("series diverges: {0}")]
    Divergent(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("degenerate linear algebra: {0}")]
    Degenerate(String),
    #[error("certification failed for {id}: expected {expected}, derived {derived}")]
    Certification {
        id: String,
        expected: String,
        derived: String,
    },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("schema error in record `{id}`: {msg}")]
    Schema { id: String, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
