use thiserror::Error;

/// Errors raised by index computation, clustering and data generation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BsiError {
    /// An argument violated a precondition (length mismatch, out-of-range label, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// `a[i] > 0` where `b[i] == 0`; the divergence is infinite.
    #[error("KL divergence undefined: support of the first argument is not contained in the second (index {index})")]
    DivergenceSupport { index: usize },

    /// Every cluster has zero geometric measure, so `q` cannot be normalised.
    /// Holds the 0-based ids of the offending clusters.
    #[error("degenerate geometry: clusters {clusters:?} have zero geometric measure")]
    DegenerateGeometry { clusters: Vec<usize> },

    /// Rescaling needs every singular direction to be defined.
    #[error("cannot rescale a rank-deficient cluster (singular values {singular_values:?})")]
    DegenerateRescale { singular_values: Vec<f64> },

    /// A data generator could not satisfy its own constraints.
    #[error("generation failed: {0}")]
    Generation(String),
}

pub type Result<T> = std::result::Result<T, BsiError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(BsiError::Domain(msg.into()))
}
