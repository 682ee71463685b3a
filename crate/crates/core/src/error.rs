use thiserror::Error;

/// Errors raised anywhere in the mapping, planning, compilation and
/// simulation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("register size mismatch: {left} vs {right} qubits")]
    RegisterMismatch { left: usize, right: usize },

    #[error("register of {n_qubits} qubits exceeds the dense limit of {limit}")]
    RegisterTooLarge { n_qubits: usize, limit: usize },

    #[error("index {index} out of range 1..={max} for {what}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },

    #[error("invalid Hamiltonian term: {0}")]
    InvalidTerm(String),

    #[error("Hermiticity violated: imaginary residue {residue:e} exceeds {tolerance:e}")]
    NotHermitian { residue: f64, tolerance: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("plan does not match Hamiltonian: {0}")]
    PlanMismatch(String),

    #[error("numerical tolerance exceeded: {0}")]
    Numerical(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
