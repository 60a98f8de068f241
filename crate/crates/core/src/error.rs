use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("matrix is not symmetric (max asymmetry {0:.3e})")]
    NotSymmetric(f64),

    #[error("eigensolver did not converge within {0} sweeps")]
    EigNoConvergence(usize),

    #[error("cone assumption violated, no minimal element: {0}")]
    NoMinimalElement(String),

    #[error("iteration has not converged; no value available")]
    Unconverged,

    #[error("state is not in the primal projection of the cone")]
    InfeasibleState,

    #[error("trajectory left the cone at step {step}")]
    InvarianceFailure { step: usize },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}
