use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet mismatch: {left} generators vs {right} generators")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("generator index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid alphabet size {0} (must be between 1 and 255)")]
    InvalidAlphabet(usize),

    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degree mismatch: expected degree {expected}, found {found}")]
    DegreeMismatch { expected: i64, found: i64 },

    #[error("unsupported range: {0}")]
    UnsupportedRange(String),

    #[error("element is not a Lie polynomial: leading word {0} is not a Lyndon word")]
    NotLie(String),

    #[error("element is not a symplectic derivation")]
    NotSymplectic,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("verification failure: {0}")]
    Verification(String),
}
