use thiserror::Error;

/// Error type shared by every module in the crate.
///
/// Variants split into two families that the CLI maps onto distinct exit
/// codes: *domain* errors (a parameter or evaluation point is outside what
/// the operation supports) and *numeric* errors (the algorithm could not
/// deliver the requested accuracy).
#[derive(Debug, Error)]
pub enum MlqError {
    /// Parameter or argument outside the supported domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested value diverges at the evaluation point.
    #[error("divergent: {0}")]
    Divergence(String),

    /// An alternating series lost too many digits to cancellation to meet
    /// the requested tolerance.
    #[error("series cancellation: {0}")]
    Cancellation(String),

    /// Quadrature, series summation, or root bracketing failed to converge
    /// within its budget.
    #[error("non-convergence: {0}")]
    NonConvergence(String),

    /// A discrete grid operation would lose more mass past its edges than
    /// the stated budget allows.
    #[error("truncation budget exceeded: {0}")]
    TruncationBudget(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl MlqError {
    /// Exit code the CLI uses for this error: 3 for domain errors, 4 for
    /// numeric/runtime failures. (Usage errors exit 2 before reaching here.)
    pub fn exit_code(&self) -> i32 {
        match self {
            MlqError::Domain(_) | MlqError::Divergence(_) => 3,
            _ => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, MlqError>;
