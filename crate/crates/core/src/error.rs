use thiserror::Error;

/// Everything that can go wrong in `walkers-core`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{list} points must be strictly increasing, found {prev} followed by {next}")]
    NotStrictlyIncreasing { list: &'static str, prev: i64, next: i64 },

    #[error("{list} point {value} is outside [0, {m})")]
    OutOfRange { list: &'static str, value: i64, m: i64 },

    #[error("parity violation: N - e_{i} + a_{j} = {value} is odd")]
    ParityViolation { i: usize, j: usize, value: i64 },

    #[error("bad dimensions: {starts} starting points and {ends} end points")]
    BadDimensions { starts: usize, ends: usize },

    #[error("bad cylinder: circumference {m}, length {n}")]
    BadCylinder { m: i64, n: i64 },

    #[error("negative path length {0}")]
    NegativeLength(i64),

    #[error("exhaustive enumeration needs {steps} step bits, cap is {cap}")]
    CapExceeded { steps: u64, cap: u32 },

    #[error("endpoint assignment {labels:?} is not a cyclic shift of the endpoint labels")]
    NotCyclic { labels: Vec<i64> },

    #[error("y must be a positive real, got {0}")]
    NonpositiveY(f64),

    #[error("{what}: computed {computed}, closed form {expected}")]
    FormulaMismatch {
        what: String,
        computed: String,
        expected: String,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("count is not positive: {0}")]
    InvalidCount(String),

    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),

    #[error("polynomial division is not exact")]
    NotExact,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// The variant name, for diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotStrictlyIncreasing { .. } => "NotStrictlyIncreasing",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::ParityViolation { .. } => "ParityViolation",
            Error::BadDimensions { .. } => "BadDimensions",
            Error::BadCylinder { .. } => "BadCylinder",
            Error::NegativeLength(_) => "NegativeLength",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::NotCyclic { .. } => "NotCyclic",
            Error::NonpositiveY(_) => "NonpositiveY",
            Error::FormulaMismatch { .. } => "FormulaMismatch",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidCount(_) => "InvalidCount",
            Error::QuadratureFailure(_) => "QuadratureFailure",
            Error::NotExact => "NotExact",
        }
    }
}
