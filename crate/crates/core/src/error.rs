use thiserror::Error;

/// Crate-wide error type. Variants carry enough context to print a
/// one-line diagnostic; callers that need to distinguish usage errors
/// from verification failures match on the variant.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("registry line {line}: {msg}")]
    Registry { line: usize, msg: String },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field size {0} exceeds supported bound {1}")]
    TooLarge(u64, u64),

    #[error("lattice error: {0}")]
    Lattice(String),

    #[error("invalid glue vector: {0}")]
    Glue(String),

    #[error("unknown surface {0:?}")]
    UnknownSurface(String),

    #[error("surface {0:?} has no covering data")]
    NotCovered(String),

    #[error("incompatible field size: {0}")]
    BadField(String),

    #[error("fiber type outside the classification table: v(c4)={0:?} v(c6)={1:?} v(disc)={2}")]
    UnclassifiedFiber(Option<u32>, Option<u32>, u32),

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
