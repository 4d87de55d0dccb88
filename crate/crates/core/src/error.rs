use thiserror::Error;

/// Errors raised by the library. Each variant names the offending quantity.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Input violates a type invariant (Hermiticity, unitarity, constraints).
    #[error("validation error: {0}")]
    Validation(String),
    /// Input lies outside the domain of the operation (y = 0, zeta = 0, pole).
    #[error("domain error: {0}")]
    Domain(String),
    /// An integrator produced a non-finite state.
    #[error("integration failure: {0}")]
    Integration(String),
    /// Implicit midpoint fixed-point iteration did not converge.
    #[error("iteration error: {0}")]
    Iteration(String),
    /// Adaptive step size fell below the underflow limit.
    #[error("stiffness error: {0}")]
    Stiffness(String),
    /// Incompatible arguments or unknown names.
    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
