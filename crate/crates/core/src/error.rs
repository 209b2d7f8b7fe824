use std::path::PathBuf;

/// Errors produced by the extraction engine and evaluation harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed CoNLL-U input, pointing at the offending line.
    #[error("line {line}: {message}")]
    Conllu { line: usize, message: String },

    /// A tag sequence contains a tag that is invalid for its scheme.
    #[error("invalid {scheme} tag `{tag}` at position {position}")]
    InvalidTag {
        scheme: &'static str,
        position: usize,
        tag: String,
    },

    /// A precondition or input-validation failure.
    #[error("{0}")]
    Validation(String),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    /// Network-level failure talking to the parse server.
    #[error("transport: {0}")]
    Transport(String),

    /// The parse server answered with a non-2xx status.
    #[error("parse server returned status {0}")]
    Server(u16),

    /// The parse server's JSON is missing a required section.
    #[error("parse response missing key `{0}`")]
    Protocol(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Error::Validation(message.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Read a file into a string, attaching the path to any I/O error.
pub fn read_to_string(path: impl Into<PathBuf>) -> Result<String> {
    let path = path.into();
    std::fs::read_to_string(&path).map_err(|e| Error::io(path, e))
}

/// Write a file atomically: write to a uniquely named sibling temp file,
/// then rename over `path`. Concurrent writers to the same path each get
/// their own temp file, so the destination is never torn.
pub fn write_atomic(path: impl Into<PathBuf>, contents: &str) -> Result<()> {
    use std::sync::atomic::{AtomicU64, Ordering};
    static COUNTER: AtomicU64 = AtomicU64::new(0);

    let path = path.into();
    let mut tmp = path.clone().into_os_string();
    tmp.push(format!(
        ".{}.{}.tmp",
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, &path).map_err(|e| Error::io(path, e))
}
