use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error in `{parameter}`: {message}")]
    Domain { parameter: String, message: String },

    #[error("degree {degree} exceeds the basis maximum {max_degree}")]
    DegreeOverflow { degree: i64, max_degree: usize },

    /// Invalid quadrature, contour or instance configuration.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// A series or quadrature did not reach its tolerance. The partial result is kept.
    #[error("no convergence after {terms} terms (partial sum {partial_sum:e}, tail bound {tail_bound:e})")]
    Convergence {
        partial_sum: f64,
        tail_bound: f64,
        terms: usize,
    },

    /// Truncated contour whose neglected tail is above tolerance.
    #[error("truncation error: neglected tail {tail:e} exceeds tolerance {tolerance:e}")]
    Truncation { tail: f64, tolerance: f64 },

    /// Singular or near-singular linear system.
    #[error("conditioning error: estimated condition number {condition:e}")]
    Conditioning { condition: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn domain(parameter: &str, message: impl Into<String>) -> Self {
        Error::Domain {
            parameter: parameter.to_string(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
