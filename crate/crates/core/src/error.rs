use thiserror::Error;

/// Errors produced by frame construction, analysis, and scaling routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Operands disagree on matrix dimension or vector length.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// An exhaustive subset search was requested over more vectors than the
    /// guard allows.
    #[error("subset enumeration over {n} vectors exceeds the guard (max_n = {max_n}); raise max_n or set force")]
    ExponentialGuard { n: usize, max_n: usize },

    /// The unique-scaling solver was called on a frame whose outer products
    /// are linearly dependent.
    #[error("unique-scaling solve requires linearly independent outer products")]
    Routing,

    /// A weight vector failed validation as a scaling.
    #[error("invalid scaling: {0}")]
    Validation(String),

    /// A scaling could not be written as a convex combination of the polytope
    /// vertices within tolerance.
    #[error("convex decomposition infeasible within tolerance (residual {residual:.3e})")]
    Decomposition { residual: f64 },

    /// Frame construction rejected the input vectors.
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
}

pub type Result<T> = std::result::Result<T, Error>;
