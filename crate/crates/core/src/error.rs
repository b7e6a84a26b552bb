use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// The variants map onto the CLI exit-code classes: [`Error::Parse`] and
/// [`Error::Usage`] are input problems, [`Error::Precondition`] means the
/// inputs were well formed but violate a mathematical requirement of the
/// operation, and [`Error::Budget`] means an enumeration would exceed its cap.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("universe mismatch: {left} vs {right} elements")]
    UniverseMismatch { left: usize, right: usize },

    #[error("{0}")]
    Usage(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
