use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A row-addressed problem in an input file. `row` is 1-based and counts the header.
    #[error("{file}: row {row}, column `{column}`: {message}")]
    Row {
        file: String,
        row: usize,
        column: String,
        message: String,
    },

    #[error("unknown emotion `{0}`")]
    UnknownEmotion(String),

    #[error("{0} is empty")]
    Empty(String),

    #[error("unknown artwork `{0}`")]
    UnknownArtwork(String),

    #[error("artwork `{0}` has no annotations")]
    NoAnnotations(String),

    #[error("no references for artwork `{0}`")]
    MissingReferences(String),

    #[error("no generation for artwork `{0}`")]
    MissingGeneration(String),

    #[error("no prediction for artwork `{0}`")]
    MissingPrediction(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn row(
        file: impl Into<String>,
        row: usize,
        column: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Error::Row {
            file: file.into(),
            row,
            column: column.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by bad input data rather than bad parameters.
    pub fn is_data_error(&self) -> bool {
        !matches!(self, Error::InvalidParameter(_))
    }
}
