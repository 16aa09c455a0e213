use thiserror::Error;

use crate::report::VerificationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("reduction polynomial {0:?} is not irreducible over GF({1})")]
    Reducible(Vec<u32>, u32),

    #[error("zero has no discrete logarithm")]
    ZeroLog,

    #[error("index {index} does not divide q - 1 = {order}")]
    BadIndex { index: u32, order: u32 },

    #[error("subgroup of index {index} has odd order {order}, so it has no halfset")]
    OddSubgroup { index: u32, order: u32 },

    #[error("not a halfset: {0}")]
    NotHalfset(String),

    #[error("invalid design: {0}")]
    InvalidDesign(String),

    #[error("invalid resolution: {0}")]
    InvalidResolution(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("wrong residue class: {0}")]
    ResidueClass(String),

    #[error("starter conditions fail: {0}")]
    Conditions(String),

    #[error("missing ingredient: {0}")]
    MissingIngredient(String),

    #[error("{what} failed verification:\n{report}")]
    Verification {
        what: String,
        report: VerificationReport,
    },

    #[error("parameter out of range: {0}")]
    Range(String),

    #[error("too many Latin squares requested: {requested} > {available}")]
    TooManySquares { requested: usize, available: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("search refused: {0}")]
    SearchRefused(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn verification(what: impl Into<String>, report: VerificationReport) -> Self {
        Error::Verification {
            what: what.into(),
            report,
        }
    }
}
