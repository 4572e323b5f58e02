use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: delay {delay_ns} ns does not increase on the previous row")]
    Ordering { line: usize, delay_ns: f64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("trace has no local extremum (all powers equal)")]
    DegenerateTrace,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate ellipsoid (zero minor axis) cannot be sampled")]
    DegenerateGeometry,

    #[error("direction undefined: point coincides with the antenna position")]
    DegenerateDirection,

    #[error("cluster {cluster}: transmit pattern rejected {rejections} consecutive scatterers")]
    SamplingStall { cluster: usize, rejections: u64 },

    #[error("path ensemble is empty")]
    EmptyEnsemble,

    #[error("grid specification: {0}")]
    GridSpec(String),

    #[error("total received power is zero")]
    DegenerateDistribution,

    #[error("pdf integrates to {integral}, expected 1")]
    Normalization { integral: f64 },

    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
