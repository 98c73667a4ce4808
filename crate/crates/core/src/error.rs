use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A row in an input file that does not match its schema.
    #[error("{file}:{line}: {message}")]
    Schema { file: String, line: u64, message: String },

    #[error("unknown region id `{id}` at row {row}")]
    UnknownRegion { id: String, row: u64 },

    #[error("self-loop edge for `{id}` at row {row}")]
    SelfLoop { id: String, row: u64 },

    #[error("duplicate region id `{0}`")]
    DuplicateRegion(String),

    #[error("invalid region `{id}`: {message}")]
    InvalidRegion { id: String, message: String },

    #[error("degenerate polygon for region `{0}` (fewer than 3 distinct vertices)")]
    DegenerateGeometry(String),

    #[error("geometry input: {0}")]
    Geometry(String),

    #[error("insufficient data: {observed} observed regions, need at least {required}")]
    InsufficientData { observed: usize, required: usize },

    #[error("statistic undefined: {0}")]
    UndefinedStatistic(&'static str),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("duplicate code `{0}`")]
    DuplicateCode(String),

    #[error("field generation failed: {0}")]
    Generation(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Whether the error stems from malformed or inconsistent input rather
    /// than from a structural failure of the run.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Schema { .. }
                | Error::UnknownRegion { .. }
                | Error::SelfLoop { .. }
                | Error::DuplicateRegion(_)
                | Error::InvalidRegion { .. }
                | Error::DegenerateGeometry(_)
                | Error::Geometry(_)
                | Error::DuplicateCode(_)
                | Error::Config(_)
                | Error::Csv(_)
        )
    }
}
