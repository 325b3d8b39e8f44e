use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus {0}: every invariant factor must be at least 2")]
    InvalidModulus(usize),

    #[error("element index {index} out of range for a group of order {order}")]
    InvalidElement { index: usize, order: usize },

    #[error("operation requires a nonempty input")]
    EmptyInput,

    #[error("subset is not a subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("operands belong to different groups ({left} vs {right})")]
    GroupMismatch { left: String, right: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid affine transformation: {0}")]
    InvalidTransform(String),

    #[error("{what} exceeds budget {limit}")]
    Budget { what: String, limit: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }
}
