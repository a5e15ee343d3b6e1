use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// Argument outside the domain of a determinant or special function.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("basis of size {requested} is numerically unstable (Gram condition {condition:.3e}); largest stable size is {max_stable}")]
    Unstable { requested: usize, condition: f64, max_stable: usize },
    #[error("{0}")]
    Inadmissible(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("spurious root at lambda = {lambda}: smallest singular value ratio {ratio:.3e}")]
    SpuriousRoot { lambda: f64, ratio: f64 },
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("invalid window: {0}")]
    Window(String),
}

pub type Result<T> = std::result::Result<T, Error>;
