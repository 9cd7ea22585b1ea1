use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("format error: {0}")]
    Format(String),

    #[error("truncated payload: expected {expected} bytes, found {actual}")]
    Truncated { expected: u64, actual: u64 },

    #[error("unsupported format: {0}")]
    Unsupported(String),

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown transition effect `{0}`")]
    Catalog(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("detector failed ({status}): {diagnostics}")]
    Detector { status: String, diagnostics: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("detector timed out after {0:.3}s")]
    Timeout(f64),

    #[error("window {index}: {source}")]
    Window {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Short machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Format(_) => "format",
            Error::Truncated { .. } => "truncated",
            Error::Unsupported(_) => "unsupported",
            Error::Inconsistent(_) => "inconsistent",
            Error::Precondition(_) => "precondition",
            Error::Catalog(_) => "catalog",
            Error::Invariant(_) => "invariant",
            Error::Detector { .. } => "detector",
            Error::Parse(_) => "parse",
            Error::Timeout(_) => "timeout",
            Error::Window { .. } => "window",
        }
    }
}
