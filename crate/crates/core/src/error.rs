use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("theta mismatch: {0} vs {1}")]
    ThetaMismatch(f64, f64),
    #[error("theta must lie in (0,1), got {0}")]
    InvalidTheta(f64),
    #[error("element is not self-adjoint (defect {0:.3e})")]
    NotSelfAdjoint(f64),
    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),
    #[error("argument is not unimodular: |z| = {0}")]
    NotUnimodular(f64),
    #[error("t must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("support point ({0}, {1}) lies outside the window N = {2}")]
    OutsideWindow(i64, i64, usize),
    #[error("window N = {n} too small for t_min = {t_min}: need e^(-N^2 t_min/2) < 1e-16")]
    InadequateWindow { n: usize, t_min: f64 },
    #[error("z = {0} is too close to the spectrum")]
    NearSpectrum(num_complex::Complex64),
    #[error("element is not invertible within the window (condition {0:.3e})")]
    NotInvertible(f64),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
