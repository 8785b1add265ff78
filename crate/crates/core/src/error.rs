use thiserror::Error;

/// Errors raised by mesh construction, assembly, coupling and the interface solver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FsiError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("kernel singularity: {0}")]
    Singularity(String),

    /// A frequency-dependent operator is singular or too ill-conditioned to trust.
    #[error("resonance in {what} at omega = {omega} rad/s (condition estimate {condition:.3e})")]
    Resonance {
        what: String,
        omega: f64,
        condition: f64,
    },

    #[error("interface mismatch: {0}")]
    Mismatch(String),

    #[error("degenerate interface: {0}")]
    DegenerateInterface(String),

    #[error("degenerate frame: {0}")]
    DegenerateFrame(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("Bi-CGSTAB breakdown at iteration {iteration}: {reason}")]
    Breakdown { iteration: usize, reason: String },

    #[error("system too large for the direct oracle: {size} > {cap} unknowns")]
    TooLarge { size: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, FsiError>;
