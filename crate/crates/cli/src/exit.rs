use std::fmt;
use std::io;
use std::path::Path;

use stdkit_core::Error;

pub const USAGE: i32 = 64;
pub const DATA: i32 = 65;
pub const NO_INPUT: i32 = 66;
pub const IO: i32 = 74;
pub const FATAL: i32 = 1;
pub const PARTIAL: i32 = 2;

/// A failed command: exit status, short kind tag and message.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub kind: String,
    pub msg: String,
}

impl CliError {
    pub fn new(code: i32, kind: &str, msg: impl Into<String>) -> Self {
        CliError {
            code,
            kind: kind.into(),
            msg: msg.into(),
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::new(USAGE, "usage", msg)
    }

    pub fn io(path: &Path, e: io::Error) -> Self {
        let msg = format!("{}: {e}", path.display());
        if e.kind() == io::ErrorKind::NotFound {
            CliError::new(NO_INPUT, "noinput", msg)
        } else {
            CliError::new(IO, "io", msg)
        }
    }

    pub fn json(path: &Path, e: serde_json::Error) -> Self {
        CliError::new(DATA, "parse", format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    /// `error: code=<n> kind=<kind> msg="<escaped>"`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = serde_json::to_string(&self.msg).unwrap_or_else(|_| "\"\"".into());
        write!(f, "error: code={} kind={} msg={msg}", self.code, self.kind)
    }
}

fn code_for(e: &Error) -> i32 {
    match e {
        Error::Io { source, .. } if source.kind() == io::ErrorKind::NotFound => NO_INPUT,
        Error::Io { .. } => IO,
        Error::Format(_)
        | Error::Truncated { .. }
        | Error::Unsupported(_)
        | Error::Inconsistent(_)
        | Error::Catalog(_)
        | Error::Invariant(_)
        | Error::Parse(_) => DATA,
        Error::Precondition(_) => USAGE,
        Error::Detector { .. } | Error::Timeout(_) => FATAL,
        Error::Window { source, .. } => code_for(source),
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::new(code_for(&e), e.kind(), e.to_string())
    }
}
