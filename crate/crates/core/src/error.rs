use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum SsfError {
    /// A request outside the supported capability envelope (orders, dimensions, families).
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Mathematically invalid input (pole of a Gamma factor, divergent integral, bad grid).
    #[error("domain error: {0}")]
    Domain(String),
    /// A numerical routine could not reach the requested accuracy.
    #[error("accuracy not reached: {what} (achieved {achieved:.3e}, requested {requested:.3e})")]
    Accuracy {
        what: String,
        achieved: f64,
        requested: f64,
    },
    /// Iteration/refinement budget exhausted before convergence.
    #[error("refinement budget exhausted: {0}")]
    Budget(String),
    /// Malformed configuration or expression input.
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, SsfError>;
