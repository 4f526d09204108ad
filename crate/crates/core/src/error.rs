use thiserror::Error;

use crate::pencil::PencilBlock;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("operands live in different fields (GF({0}) vs GF({1}))")]
    FieldMismatch(u32, u32),
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial has degree zero")]
    ZeroDegree,
    #[error("Moebius transform is inadmissible: a*I + b*companion is singular")]
    Inadmissible,
    #[error("expected a matrix with two slices along the third axis, got {0}")]
    WrongSliceCount(usize),
    #[error("field too small: no slice substitution removes the infinite blocks {blocks:?}")]
    FieldTooSmall { blocks: Vec<PencilBlock> },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("spatial matrix is not regular (slice-family ranks m'={m}, n'={n}, q'={q})")]
    NotRegular { m: usize, n: usize, q: usize },
    #[error("unsupported shape {m}x{n}x{q}: classification needs n <= 2 and q <= 2")]
    UnsupportedShape { m: usize, n: usize, q: usize },
    #[error("transformation witness contains a singular matrix")]
    SingularWitness,
    #[error("GF({p}) exceeds the exhaustive search bound {bound}")]
    FieldTooLargeForSearch { p: u32, bound: u32 },
    #[error("enumeration needs {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name, used in structured diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::ZeroInverse => "ZeroInverse",
            Error::Singular => "Singular",
            Error::DimMismatch(_) => "DimMismatch",
            Error::FieldMismatch(..) => "FieldMismatch",
            Error::BothZero => "BothZero",
            Error::NotMonic => "NotMonic",
            Error::ZeroDegree => "ZeroDegree",
            Error::Inadmissible => "Inadmissible",
            Error::WrongSliceCount(_) => "WrongSliceCount",
            Error::FieldTooSmall { .. } => "FieldTooSmall",
            Error::Unsupported(_) => "Unsupported",
            Error::NotRegular { .. } => "NotRegular",
            Error::UnsupportedShape { .. } => "UnsupportedShape",
            Error::SingularWitness => "SingularWitness",
            Error::FieldTooLargeForSearch { .. } => "FieldTooLargeForSearch",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::Parse(_) => "Parse",
        }
    }
}
