use thiserror::Error;

/// Errors produced by the closed-form and numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside the domain of the operation (a ≤ 0, r ≤ 0, bad grid, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested closed-form configuration does not exist for these inputs.
    #[error("no joint ground/excited solution for m = {m}: requires m^2 + 2 sqrt(ac) = 4 with a, c > 0, so m must be 0 or 1")]
    Unsolvable { m: u32 },

    /// Parameters do not satisfy a closed-form constraint to the required tolerance.
    #[error("constraint violated: {0}")]
    ConstraintViolation(String),

    /// An iterative routine ran out of iterations.
    #[error("convergence failure: {0}")]
    Convergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
