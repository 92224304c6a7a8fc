use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// The command line maps the variants onto exit codes via [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands or arguments that do not fit together (variable-list
    /// mismatch, wrong dimension, unknown variable, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// Malformed expression text.
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    /// Job document that violates the schema.
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    /// Input data that fails a domain precondition (coprimality, genericity).
    #[error("validation error: {0}")]
    Validation(String),

    /// Division by zero and friends.
    #[error("arithmetic error: {0}")]
    Arithmetic(String),

    /// An operation was called outside its contract (e.g. the closed-form
    /// residue on a degenerate germ).
    #[error("contract violation: {0}")]
    Contract(String),

    /// The monomial-representation search ran out of budget.
    #[error("no representation found within caps (max exponent {max_exponent}, max cofactor degree {max_degree})")]
    CapsExhausted { max_exponent: u32, max_degree: u32 },

    /// Two routes to the same quantity disagreed, or a certified identity
    /// failed to hold. Always a bug.
    #[error("integrity error: {0}")]
    Integrity(String),

    /// A failure while evaluating one fixed-point chart (0-based index).
    #[error("chart {index}: {source}")]
    AtChart { index: usize, source: Box<Error> },
}

impl Error {
    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_)
            | Error::Syntax { .. }
            | Error::Schema { .. }
            | Error::Validation(_)
            | Error::Contract(_) => 2,
            Error::Arithmetic(_) | Error::CapsExhausted { .. } => 3,
            Error::Integrity(_) => 4,
            Error::AtChart { source, .. } => source.exit_code(),
        }
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn integrity(msg: impl Into<String>) -> Self {
        Error::Integrity(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
