use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("slerp endpoints are antipodal, the great circle is undefined")]
    AntipodalPoints,

    #[error("constellation invariant violated: {0}")]
    InvalidConstellation(String),

    /// The trellis would need more branches per step than the configured cap.
    #[error("trellis needs {required} branches per step, cap is {cap}")]
    Infeasible { required: u128, cap: u128 },

    #[error("spectral factorization failed: {0}")]
    Factorization(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
