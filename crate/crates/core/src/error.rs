use thiserror::Error;

/// Errors raised by the library. Precondition failures carry the operation
/// name and the violated precondition so the CLI can surface them verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{op}: {text}")]
    Precondition { op: &'static str, text: String },

    /// A quantity documented to be an integer came out with a denominator.
    #[error("{op}: expected an integer, got {value}")]
    NonIntegral { op: &'static str, value: String },

    /// A cross-check between two independent routes disagreed.
    #[error("{op}: conformance failure: {text}")]
    Conformance { op: &'static str, text: String },

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn pre(op: &'static str, text: impl Into<String>) -> Self {
        Error::Precondition {
            op,
            text: text.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
