use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum PhaseError {
    #[error("cutoff {cutoff} too small: {reason} (minimal adequate cutoff ~ {suggested})")]
    CutoffTooSmall {
        cutoff: usize,
        suggested: usize,
        reason: String,
    },

    #[error("degenerate superposition: resulting norm {norm:e} is numerically zero")]
    DegenerateSuperposition { norm: f64 },

    #[error("cutoff mismatch: {left} vs {right}")]
    CutoffMismatch { left: usize, right: usize },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("Wigner kernel inconsistency: imaginary residue {residue:e} at r={r}, theta={theta}")]
    KernelInconsistency { residue: f64, r: f64, theta: f64 },

    #[error("quadrature construction failed: moment q={q} has relative error {rel_err:e}")]
    Quadrature { q: usize, rel_err: f64 },

    #[error(
        "cancellation overflow in rho_W(0) at cutoff {cutoff}: element ({row},{col}) \
         violates hermiticity by {deviation:e} after summing {terms} terms"
    )]
    CancellationOverflow {
        cutoff: usize,
        row: usize,
        col: usize,
        deviation: f64,
        terms: usize,
    },

    #[error(
        "operator path unavailable at cutoff {cutoff} (validated up to {max}); use the radial path"
    )]
    PathUnavailable { cutoff: usize, max: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("numerical validation failed: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, PhaseError>;
