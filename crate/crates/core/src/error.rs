use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HodgeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not nilpotent")]
    NotNilpotent,

    #[error("bilinear form is degenerate")]
    DegenerateForm,

    #[error("not a mixed Hodge structure: {0}")]
    NotMixedHodge(String),

    #[error("not polarized: {0}")]
    NotPolarized(String),

    #[error("no adapted basis: {0}")]
    NotAdapted(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, HodgeError>;
