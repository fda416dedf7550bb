use thiserror::Error;

/// Errors raised by the model operations.
///
/// Check *failures* (an identity that does not hold, a kernel condition that
/// is violated) are not errors: they are reported through the verdict types of
/// each module. These variants cover malformed input and violated
/// preconditions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structure(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("operands live on different carriers ({0})")]
    Mismatch(String),

    #[error("operation requires a nonnegative operand")]
    Negative,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("sequence rejected at index {index}: {reason}")]
    Sequence { index: usize, reason: String },

    #[error("size bound exceeded: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;
