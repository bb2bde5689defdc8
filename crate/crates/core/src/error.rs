use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid permutation: {reason}")]
    InvalidPermutation { reason: String },

    #[error("invalid permutation: value {0} appears more than once")]
    DuplicateEntry(usize),

    #[error("letter {letter} is outside the generator range 1..={max}")]
    LetterOutOfRange { letter: usize, max: usize },

    #[error("block count mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("{what} is {size}, above the cap of {cap}")]
    TooLarge { what: &'static str, size: usize, cap: usize },

    #[error("precondition violated: permutation contains the pattern 312")]
    Contains312,

    #[error("precondition violated: permutation contains the pattern 231")]
    Contains231,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("vertex not found: {0}")]
    VertexNotFound(String),

    #[error("precondition violated: graph is not connected")]
    NotConnected,
}

impl Error {
    /// Process exit status for the command-line frontend.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_)
            | Error::InvalidPermutation { .. }
            | Error::DuplicateEntry(_)
            | Error::LetterOutOfRange { .. } => 1,
            Error::TooLarge { .. } => 2,
            _ => 3,
        }
    }
}
