use crate::rational::{ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),
    #[error("{n}^{m} allocations exceed the enumeration guard of 2^48")]
    TooLarge { n: usize, m: usize },
    #[error("{notion} is not defined in space {space}")]
    WrongSpace { notion: String, space: String },
    #[error("{0} is not supported in this space")]
    UnsupportedLevel(String),
    #[error("a maximin share profile is required")]
    MissingProfile,
    #[error("alpha {alpha} is outside the range allowed by {notion}")]
    BadAlpha { alpha: Rational, notion: String },
    #[error("{0} requires uniformly signed item values")]
    MixedSigns(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("epsilon out of range: {0}")]
    BadEpsilon(String),
    #[error("malformed document: {0}")]
    Document(String),
    #[error(transparent)]
    Parse(#[from] ParseRationalError),
}

pub type Result<T> = std::result::Result<T, Error>;
