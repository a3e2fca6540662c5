use std::fmt;

/// Failure class, used by callers to pick a process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad invocation: missing arguments, unusable configuration.
    Usage,
    /// Bad input data: unreadable files, malformed records, mismatched hashes.
    Data,
    /// Broken internal invariant; always a bug.
    Internal,
}

pub struct Error {
    kind: ErrorKind,
    msg: String,
    source: Option<Box<dyn std::error::Error + Send + Sync>>,
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error { kind: ErrorKind::Usage, msg: msg.into(), source: None }
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Error { kind: ErrorKind::Data, msg: msg.into(), source: None }
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error { kind: ErrorKind::Internal, msg: msg.into(), source: None }
    }

    pub fn with_source(mut self, source: impl std::error::Error + Send + Sync + 'static) -> Self {
        self.source = Some(Box::new(source));
        self
    }

    pub fn kind(&self) -> ErrorKind {
        self.kind
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.msg)?;
        if let Some(src) = &self.source {
            write!(f, ": {src}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {self}", self.kind)
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        self.source.as_deref().map(|e| e as _)
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shorthand for wrapping I/O failures on a named file.
pub fn io_data(path: &std::path::Path, err: std::io::Error) -> Error {
    Error::data(format!("{}", path.display())).with_source(err)
}
