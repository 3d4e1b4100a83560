use std::fmt;

/// Errors of the std layer: fixtures, files and formats.
#[derive(Debug)]
pub enum Error {
    Core(zipfsem_core::Error),
    UnknownFixture(String),
    ChecksumMismatch { id: String, expected: String, actual: String },
    /// Malformed input; `line` is 1-based when known.
    Parse { source: String, line: Option<u64>, message: String },
    Io(std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(source: impl Into<String>, line: Option<u64>, message: impl Into<String>) -> Self {
        Error::Parse { source: source.into(), line, message: message.into() }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Core(e) => e.fmt(f),
            Error::UnknownFixture(id) => write!(f, "unknown fixture `{id}`"),
            Error::ChecksumMismatch { id, expected, actual } => {
                write!(f, "checksum mismatch for `{id}`: expected {expected}, got {actual}")
            }
            Error::Parse { source, line: Some(l), message } => write!(f, "{source}:{l}: {message}"),
            Error::Parse { source, line: None, message } => write!(f, "{source}: {message}"),
            Error::Io(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Core(e) => Some(e),
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<zipfsem_core::Error> for Error {
    fn from(e: zipfsem_core::Error) -> Self {
        Error::Core(e)
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        let line = e.position().map(|p| p.line());
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => Error::parse("csv", line, format!("{other:?}")),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            return Error::Io(e.into());
        }
        Error::parse("json", Some(e.line() as u64), e.to_string())
    }
}
