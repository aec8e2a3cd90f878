use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside its documented domain.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The requested point set would not fit in memory.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// The target function returned a non-finite value.
    #[error("non-finite function value {value} at point index {index}")]
    NonFinite { index: usize, value: f64 },

    /// A partition bin received no points. Messages number axes and bins
    /// from one; the fields are zero-based.
    #[error("partition bin {} ([{lower}, {upper})) on axis {} is empty; use fewer partitions", .bin + 1, .axis + 1)]
    EmptyPartition {
        axis: usize,
        bin: usize,
        lower: f64,
        upper: f64,
    },

    /// Algorithm I was asked to fit an axis where every abscissa is distinct.
    #[error("axis {} is fully projection regular (m = 1); use Algorithm II with a partition count", .axis + 1)]
    FullyProjectionRegular { axis: usize },

    /// A linear system could not be solved.
    #[error("singular system: {0}")]
    Singular(String),

    /// Malformed input file or configuration.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
