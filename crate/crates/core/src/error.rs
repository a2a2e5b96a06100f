use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Arguments outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A truncated series or search hit its term cap before the tail bound was met.
    #[error("series did not converge within {max_terms} terms ({context})")]
    Convergence { max_terms: usize, context: String },

    /// A brute-force oracle was asked to enumerate beyond its cap.
    #[error("combinatorial limit exceeded: {0}")]
    CombinatorialLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
