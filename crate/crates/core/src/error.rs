use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch in {op}: {detail}")]
    DimensionMismatch { op: &'static str, detail: String },
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("permutation sums are capped at n = {cap}, got n = {n}")]
    SizeCapExceeded { n: usize, cap: usize },
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("weight {0} is not Hermitian positive definite")]
    WeightNotHpd(&'static str),
    #[error("matrix is not Hermitian positive definite")]
    NotHpd,
    #[error("exact square root of {0} is required but was not supplied")]
    MissingSquareRoot(&'static str),
    #[error("complex matrix is not the adjoint image of a quaternion matrix")]
    NotAQuaternionImage,
    #[error("NaN produced in floating-point computation")]
    NotANumber,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub(crate) fn mismatch(op: &'static str, detail: impl Into<String>) -> Error {
    Error::DimensionMismatch { op, detail: detail.into() }
}
