use thiserror::Error;

/// Failures surfaced by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("root count mismatch for l = {l}: expected {expected}, found {found}")]
    RootCount { l: u32, expected: usize, found: usize },

    #[error("quadrature did not converge: estimated error {achieved:e} above requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("phase continuation failed: {0}")]
    Winding(String),

    #[error("iteration did not converge: {0}")]
    NoConvergence(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by the numerics rather than by the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RootCount { .. }
                | Error::Quadrature { .. }
                | Error::Winding(_)
                | Error::NoConvergence(_)
        )
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
