use thiserror::Error;

/// Errors raised by the toolkit.
///
/// The variants map onto the command-line exit codes: `Hypothesis` and
/// `InvalidInput` are caller mistakes (exit 2), `Resolution` means the
/// discretization could not certify the requested accuracy (exit 3).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("hypothesis violated: {constraint} ({detail})")]
    Hypothesis {
        constraint: &'static str,
        detail: String,
    },

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn hypothesis(constraint: &'static str, detail: impl Into<String>) -> Self {
        Error::Hypothesis {
            constraint,
            detail: detail.into(),
        }
    }

    /// Process exit code associated with the error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Resolution(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
