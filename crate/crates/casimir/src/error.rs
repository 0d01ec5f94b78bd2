use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CasimirError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("zero temperature: alpha is undefined, use the T = 0 path")]
    ZeroTemperature,
    #[error("series did not converge: {0}")]
    NonConvergent(String),
    #[error("out of regime: {0}")]
    Regime(String),
    #[error("kernel spectral radius {radius:.4} >= 1 at y = {y:e} 1/m")]
    SpectralRadius { y: f64, radius: f64 },
    #[error("profile does not reach the plateau: need y_max >= {required:e} 1/m")]
    Coverage { required: f64 },
    #[error("fit failed: {0}")]
    Fit(String),
    #[error("mesh error: {0}")]
    Mesh(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for CasimirError {
    fn from(e: std::io::Error) -> Self {
        CasimirError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CasimirError>;
