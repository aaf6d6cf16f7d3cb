//! Crate-wide error type.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),

    #[error("required column '{0}' missing from CSV header")]
    HeaderMissing(String),

    #[error("data quality: {dropped} of {total} rows dropped during load")]
    DataQuality { dropped: usize, total: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("column '{0}' is constant and cannot be standardized")]
    ConstantColumn(String),

    #[error("degenerate split: n={n}, train_fraction={train_fraction} leaves an empty side")]
    DegenerateSplit { n: usize, train_fraction: f64 },

    #[error("invalid fold count k={k} for n={n} (need 2 <= k <= n)")]
    InvalidK { k: usize, n: usize },

    #[error("dataset is not standardized")]
    NotStandardized,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("labels are degenerate: need at least one positive and one negative")]
    DegenerateLabels,

    #[error("singular system: design matrix is collinear at lambda = 0")]
    SingularSystem,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// CLI exit code category: 1 for configuration/data problems, 2 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::FileNotFound(_)
            | Error::HeaderMissing(_)
            | Error::DataQuality { .. }
            | Error::EmptyInput
            | Error::ConstantColumn(_)
            | Error::Config(_)
            | Error::Io(_)
            | Error::Csv(_)
            | Error::InvalidK { .. }
            | Error::DegenerateSplit { .. } => 1,
            Error::NotStandardized
            | Error::DimensionMismatch(_)
            | Error::LengthMismatch(_, _)
            | Error::DegenerateLabels
            | Error::SingularSystem
            | Error::InvalidInput(_) => 2,
        }
    }
}
