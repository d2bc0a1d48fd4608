use thiserror::Error;

/// Errors surfaced by the kernel.
///
/// `Precision` and `IterationCap` are first-class outcomes: they mean the
/// configured search horizon was exhausted, never that an answer is zero.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("order not established within precision cap {cap} ({context}); raise precision or fix input")]
    Precision { cap: u64, context: String },

    #[error("iteration cap {iterations} reached with stable minimum value {stable_min}; the value group appears to be {stable_min}*Z")]
    IterationCap { iterations: u64, stable_min: u64 },
}

impl Error {
    pub fn precision(cap: u64, context: impl Into<String>) -> Self {
        Error::Precision {
            cap,
            context: context.into(),
        }
    }

    /// Add context to a precision error, e.g. the variable being processed.
    pub fn in_context(self, extra: &str) -> Self {
        match self {
            Error::Precision { cap, context } => Error::Precision {
                cap,
                context: format!("{extra}: {context}"),
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
