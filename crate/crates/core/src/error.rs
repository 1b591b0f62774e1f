use crate::coherent::SelectionReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("series did not converge within {terms} terms (remainder estimate {remainder:e})")]
    Convergence { terms: usize, remainder: f64 },

    #[error("quadrature tail {tail:e} above tolerance {tol:e} at cutoff index {cutoff}")]
    QuadratureTail { tail: f64, tol: f64, cutoff: usize },

    #[error("precision loss: {0}")]
    Precision(String),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("no lattice convention resolved unity ({} candidates tried)", .0.candidates.len())]
    SelectionFailed(Box<SelectionReport>),

    #[error("internal error: {0}")]
    Internal(String),
}
