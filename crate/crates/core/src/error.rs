use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("format error: {0}")]
    Format(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("image {width}x{height} is smaller than the 32x32 minimum")]
    ImageTooSmall { width: usize, height: usize },

    #[error("block ({col}, {row}) has no defined ridge orientation")]
    UndefinedOrientation { col: usize, row: usize },

    #[error("ridge signature of block ({col}, {row}) has too few in-image samples")]
    SignatureOutOfBounds { col: usize, row: usize },

    #[error("undefined statistic: {0}")]
    Undefined(String),

    #[error("score set has no {0} scores")]
    EmptyClass(&'static str),

    #[error("rate {requested} is not resolvable with {samples} samples (minimum resolvable rate {min_resolvable})")]
    UnattainableRate {
        requested: f64,
        samples: usize,
        min_resolvable: f64,
    },

    #[error("score csv row {row}: {message}")]
    Csv { row: usize, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
