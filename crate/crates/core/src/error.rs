use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("matrix is singular")]
    Singular,

    #[error("degenerate simplex: {0}")]
    Degenerate(String),

    #[error("polytope is not simplicial: {0}")]
    NotSimplicial(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("engine mismatch: {0}")]
    EngineMismatch(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable tag used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Shape(_) => "shape",
            Error::Singular => "singular",
            Error::Degenerate(_) => "degenerate",
            Error::NotSimplicial(_) => "not_simplicial",
            Error::Budget(_) => "budget",
            Error::Domain(_) => "domain",
            Error::Unsupported(_) => "unsupported",
            Error::Format(_) => "format",
            Error::EngineMismatch(_) => "engine_mismatch",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
