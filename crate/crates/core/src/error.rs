use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch")]
    GridMismatch,
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("symbol vanishes on a dual mode and no mean-zero convention was requested")]
    SingularSymbol,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operator is not unitary (defect {0:.3e})")]
    NotUnitary(f64),
    #[error("operator is not selfadjoint (defect {0:.3e})")]
    NotSelfadjoint(f64),
    #[error("vector has positron components, expected an electron wave function")]
    NotElectron,
    #[error("test function leaves the mode span (residual {residual:.3e} > {tol:.1e})")]
    SpanResidual { residual: f64, tol: f64 },
    #[error("mode span is not closed under the shift (residual {0:.3e})")]
    NotShiftClosed(f64),
    #[error("model has no differential operator")]
    MissingDiffOp,
    #[error("truncation too small: {0}")]
    Truncation(String),
    #[error("charged vector cannot be normalized")]
    Normalization,
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
