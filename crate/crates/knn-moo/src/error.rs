use std::fmt;

/// Library-wide error type.
///
/// Contract violations (mismatched vector lengths, out-of-bounds solutions)
/// panic instead — they indicate bugs in calling code, not recoverable
/// conditions. `Error` covers the recoverable ones: bad configuration,
/// unsupported problem variants, and I/O while running experiments.
#[derive(Debug)]
pub enum Error {
    /// A configuration field failed validation.
    InvalidConfig { field: String, message: String },
    /// The problem does not support the requested dimensionality.
    UnsupportedDimension { requested: usize, reason: String },
    /// The problem has no closed-form ideal front to sample.
    NoAnalyticFront { problem: String },
    /// An operation that needs at least one point got an empty front.
    EmptyFront { context: String },
    /// The evaluation budget is too small to run the configured search.
    BudgetTooSmall { budget: u64, required: u64 },
    /// Wrapped I/O error with the path that failed.
    Io { path: String, source: std::io::Error },
    /// Config file could not be parsed.
    Parse { path: String, message: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidConfig { field, message } => {
                write!(f, "invalid config: {field}: {message}")
            }
            Error::UnsupportedDimension { requested, reason } => {
                write!(f, "unsupported dimension {requested}: {reason}")
            }
            Error::NoAnalyticFront { problem } => {
                write!(f, "{problem} has no analytic ideal front")
            }
            Error::EmptyFront { context } => write!(f, "empty front: {context}"),
            Error::BudgetTooSmall { budget, required } => write!(
                f,
                "budget {budget} too small: need at least {required} evaluations \
                 for two generations"
            ),
            Error::Io { path, source } => write!(f, "{path}: {source}"),
            Error::Parse { path, message } => write!(f, "{path}: {message}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
