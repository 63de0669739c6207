//! Error type shared by every module.
//!
//! Each variant maps to a stable machine-readable code (see [`Error::code`])
//! which the CLI prints as the prefix of its one-line error message.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown generator `{0}` (expected one of squared, negentropy, itakura_saito, bit_entropy)")]
    UnknownGenerator(String),

    #[error("dimension must be at least 1")]
    InvalidDimension,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} is outside the domain {domain}")]
    DomainViolation { what: String, domain: String },

    #[error("gradient mean {gradient:?} is outside the range of the gradient map of `{generator}`")]
    DualMapOutOfRange { generator: String, gradient: Vec<f64> },

    #[error("distribution has no support points")]
    EmptyDistribution,

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("unknown data model `{0}` (expected one of gaussian_sine, two_point, logistic_bernoulli)")]
    UnknownDataModel(String),

    #[error("incompatible parameters: {0}")]
    IncompatibleParams(String),

    #[error("unknown learner `{0}` (expected one of shrunk_mean, knn_mean, laplace_rate)")]
    UnknownLearner(String),

    #[error("invalid hyperparameter: {0}")]
    InvalidHyperparameter(String),

    #[error("mode {0} is not supported: {1}")]
    ModeUnsupported(String, String),

    #[error("unknown exponential family `{0}` (expected one of bernoulli, poisson, gaussian_fixed_var)")]
    UnknownFamily(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("truncation bound unreachable: {0}")]
    TruncationFailure(String),

    #[error("element {index}: {source}")]
    AtIndex { index: usize, source: Box<Error> },

    #[error("line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{0}")]
    MissingConfigKeys(String),

    #[error("samples file: {0}")]
    Samples(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Stable error code used as the CLI's stderr prefix.
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnknownGenerator(_) => "E_UNKNOWN_GENERATOR",
            Error::InvalidDimension => "E_INVALID_DIMENSION",
            Error::DimensionMismatch { .. } => "E_DIMENSION_MISMATCH",
            Error::DomainViolation { .. } => "E_DOMAIN_VIOLATION",
            Error::DualMapOutOfRange { .. } => "E_DUAL_MAP_OUT_OF_RANGE",
            Error::EmptyDistribution => "E_EMPTY_DISTRIBUTION",
            Error::InvalidWeights(_) => "E_INVALID_WEIGHTS",
            Error::UnknownDataModel(_) => "E_UNKNOWN_DATA_MODEL",
            Error::IncompatibleParams(_) => "E_INCOMPATIBLE_PARAMS",
            Error::UnknownLearner(_) => "E_UNKNOWN_LEARNER",
            Error::InvalidHyperparameter(_) => "E_INVALID_HYPERPARAMETER",
            Error::ModeUnsupported(..) => "E_MODE_UNSUPPORTED",
            Error::UnknownFamily(_) => "E_UNKNOWN_FAMILY",
            Error::InvalidParameter(_) => "E_INVALID_PARAMETER",
            Error::TruncationFailure(_) => "E_TRUNCATION_FAILURE",
            Error::AtIndex { source, .. } => source.code(),
            Error::Config { .. } | Error::MissingConfigKeys(_) => "E_CONFIG",
            Error::Samples(_) => "E_SAMPLES",
            Error::Io(_) => "E_IO",
        }
    }

    pub(crate) fn at(index: usize, source: Error) -> Error {
        Error::AtIndex {
            index,
            source: Box::new(source),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
