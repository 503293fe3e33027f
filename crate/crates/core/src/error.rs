use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used by the command-line driver to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Parse,
    Validation,
    Verification,
}

impl ErrorKind {
    pub fn tag(self) -> &'static str {
        match self {
            ErrorKind::Usage => "usage",
            ErrorKind::Parse => "parse",
            ErrorKind::Validation => "validation",
            ErrorKind::Verification => "verification",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Usage => 1,
            ErrorKind::Parse => 2,
            ErrorKind::Validation => 3,
            ErrorKind::Verification => 4,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("label ids start at 1, got {0}")]
    InvalidLabel(u64),

    #[error("support threshold must be at least 1, got {0}")]
    InvalidThreshold(usize),

    #[error("domain mismatch: expected {expected}, found {found}")]
    DomainMismatch { expected: String, found: String },

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("transaction {index}: {reason}")]
    InvalidTransaction { index: usize, reason: String },

    #[error("pattern {pattern} has no preimage under {reduction}")]
    NoPreimage { reduction: String, pattern: String },

    #[error("pattern {pattern} cannot be mapped by {reduction}")]
    Unrepresentable { reduction: String, pattern: String },

    #[error("reductions do not chain: {0}")]
    IncompatibleReductions(String),

    #[error("unknown reduction `{0}`")]
    UnknownReduction(String),

    #[error("bad feasibility descriptor: {0}")]
    BadDescriptor(String),

    #[error("instance exceeds the oracle size guard ({0}); use the miner instead")]
    OracleGuard(String),

    #[error("{pattern} is not a maximal feasible frequent pattern of this instance")]
    NotMaximal { pattern: String },

    #[error("known set has {known} patterns but k = {k} requires fewer")]
    KnownTooLarge { known: usize, k: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Usage(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse { .. } | Error::Io(_) => ErrorKind::Parse,
            Error::Usage(_)
            | Error::UnknownReduction(_)
            | Error::BadDescriptor(_)
            | Error::InvalidThreshold(_) => ErrorKind::Usage,
            Error::Verification(_) => ErrorKind::Verification,
            _ => ErrorKind::Validation,
        }
    }

    pub(crate) fn mismatch(expected: impl ToString, found: impl ToString) -> Self {
        Error::DomainMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
