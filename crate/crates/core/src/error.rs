use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("nome {0} is outside the open interval (0, 1)")]
    NomeDomain(f64),

    #[error("relative tolerance {0:e} is outside (0, 1e-3)")]
    Tolerance(f64),

    #[error("series did not reach relative tolerance {rel_tol:e} within {terms} terms")]
    ToleranceNotAchieved { terms: usize, rel_tol: f64 },

    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The semiclassical partition function `length/lambda_d - 1/2` is not positive.
    #[error(
        "semiclassical model undefined for box length {length} at lambda_d {lambda_d}: \
         length/lambda_d - 1/2 = {} <= 0",
        length / lambda_d - 0.5
    )]
    ModelDomain { length: f64, lambda_d: f64 },

    #[error("unknown partition model `{0}` (expected exact, semiclassical, classical or ground)")]
    UnknownModel(String),

    #[error("unknown figure `{0}` (expected fig2 .. fig9)")]
    UnknownFigure(String),

    #[error("invalid axis `{text}`: {reason}")]
    Axis { text: String, reason: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{}: malformed row: {reason}", path.display())]
    Parse { path: PathBuf, reason: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }
}
