use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("matrix is not unitary: max |U^dag U - I| = {deviation:.3e} (tolerance {tolerance:.1e})")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("operator is not Hermitian: max |X - X^dag| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("not a density matrix: {0}")]
    InvalidState(String),

    #[error("observable is not in class `{class}` (least-squares residual {residual:.3e})")]
    NotInClass { class: String, residual: f64 },

    /// A fitted shrink factor vanished, so the added noise is undefined.
    #[error("information destroyed on output {output}: fitted shrink factor {shrink:.3e}")]
    InformationDestroyed { output: usize, shrink: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
