use thiserror::Error;

/// Errors raised by the numeric and symbolic layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An iteration failed to reach its tolerance.
    #[error("no convergence in {what} (residual {residual:e})")]
    NonConvergence { what: &'static str, residual: f64 },
    /// A coordinate chart or root bracket broke down.
    #[error("geometry error: {0}")]
    Geometry(String),
    /// The boundary is not strictly convex.
    #[error("convexity error: {0}")]
    Convexity(String),
    /// A periodic-orbit search ended at a degenerate configuration.
    #[error("search error: {0}")]
    Search(String),
    /// A matrix failed a grading or shape assertion.
    #[error("structural error: {0}")]
    Structural(String),
    /// A determinant vanished where an inverse was requested.
    #[error("singular matrix: {0}")]
    Singular(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
