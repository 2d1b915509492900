use thiserror::Error;

/// Failure modes shared by every module of the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Mode registries, partitions or parameters that do not fit together.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// An argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Truncation too small or epsilon too close to one for the requested accuracy.
    #[error("precision error: {message}{}", required_truncation.map(|n| format!(" (required truncation N >= {n})")).unwrap_or_default())]
    Precision {
        message: String,
        required_truncation: Option<u32>,
    },

    /// A projective outcome whose probability falls below the floor.
    #[error("zero-probability outcome: {message} (probability {probability:e})")]
    ZeroProbability {
        message: String,
        probability: f64,
        /// `true` when the outcome is possible in exact arithmetic but underflowed.
        underflow: bool,
    },

    /// A dense representation would exceed the configured size cap.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Configuration(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
