use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("pattern length {len} outside accepted bounds [{min}, {max}]")]
    LengthBounds { len: usize, min: usize, max: usize },

    #[error("the map has no nodes")]
    EmptyMap,

    #[error("unknown node id {0}")]
    UnknownNode(usize),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("unknown phoneme symbol `{0}`")]
    UnknownPhoneme(String),

    #[error("word `{0}` is not in the pronunciation dictionary")]
    OutOfVocabulary(String),

    #[error("could not generate {wanted} negatives: only {found} found after {attempts} draws")]
    Unsatisfiable {
        wanted: usize,
        found: usize,
        attempts: usize,
    },

    #[error("{0}")]
    Degenerate(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
