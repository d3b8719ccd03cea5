use alloc::string::String;
use core::fmt;

/// Which score axis of a pool a problem refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Validation,
    Test,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Validation => f.write_str("validation"),
            Axis::Test => f.write_str("test"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    InvalidArgument(String),
    InvalidDistribution(String),
    /// A record holds a non-finite score.
    InvalidData {
        index: usize,
        axis: Axis,
    },
    InsufficientData {
        needed: usize,
        got: usize,
    },
    /// Zero sample variance on one axis makes the Gaussian fit undefined.
    DegeneratePool {
        axis: Axis,
    },
    /// The statistic failed on too many resamples.
    ResamplingDegenerate {
        failures: usize,
        replicates: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::InvalidDistribution(msg) => write!(f, "invalid distribution: {msg}"),
            Error::InvalidData { index, axis } => {
                write!(f, "invalid data: record {index} has a non-finite {axis} score")
            }
            Error::InsufficientData { needed, got } => {
                write!(f, "insufficient data: need at least {needed} values, got {got}")
            }
            Error::DegeneratePool { axis } => {
                write!(f, "degenerate pool: {axis} scores have zero variance")
            }
            Error::ResamplingDegenerate { failures, replicates } => write!(
                f,
                "resampling degenerate: statistic failed on {failures} draws for {replicates} replicates ({:.2}%)",
                100.0 * *failures as f64 / *replicates as f64
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid_argument(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
