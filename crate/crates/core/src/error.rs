use std::fmt;

use thiserror::Error;

/// Errors produced by the evaluators and scanners.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The route cannot provide a provable error bound for these parameters.
    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),

    /// The requested accuracy would need more work than the route allows.
    #[error("tolerance unreachable: {0}")]
    ToleranceUnreachable(String),

    /// A scan grid violates its construction rules.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// An evaluation error raised while scanning, tagged with the grid point.
    #[error("at (var = {var}, r = {r}): {source}")]
    AtPoint {
        var: f64,
        r: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl fmt::Display) -> Self {
        Error::Domain(msg.to_string())
    }

    pub(crate) fn at_point(self, var: f64, r: f64) -> Self {
        Error::AtPoint { var, r, source: Box::new(self) }
    }

    /// The error with any point annotation stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtPoint { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
