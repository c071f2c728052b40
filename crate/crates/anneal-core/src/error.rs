//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by model construction, transformations, and solvers.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("configuration has {got} spins but the model has {expected} qubits")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    IndexOutOfRange { index: usize, num_qubits: usize },

    #[error("term {index} is invalid: {reason}")]
    InvalidTerm { index: usize, reason: String },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("operation requires a unit model, but term {index} has coefficient {coeff}")]
    UnitModelRequired { index: usize, coeff: String },

    #[error("model has {num_qubits} qubits, exceeding the exhaustive enumeration limit of {limit}")]
    ExhaustiveLimitExceeded { num_qubits: usize, limit: usize },

    #[error("model has {num_qubits} qubits, exceeding the matrix-vector product limit of {limit}")]
    MatvecLimitExceeded { num_qubits: usize, limit: usize },

    #[error("integer overflow while scaling rational coefficients to a common denominator")]
    ScaleOverflow,

    #[error("gadget construction supports only 1- and 2-local source terms; term {index} acts on {locality} qubits")]
    UnsupportedLocality { index: usize, locality: usize },

    #[error(
        "eigensolver did not converge at lambda = {lambda}: residual {residual:.3e} exceeds {tolerance:.3e} after {iterations} iterations"
    )]
    SolverNotConverged {
        lambda: f64,
        residual: f64,
        tolerance: f64,
        iterations: usize,
    },

    #[error("requested {k} eigenpairs but the Hilbert space dimension is only {dimension}")]
    TooManyEigenpairs { k: usize, dimension: usize },

    #[error(
        "degeneracy census {census} does not equal a*s = {expected}; \
         the input model likely has single-flip degeneracies (ferro-pair pass skipped?)"
    )]
    CensusMismatch { census: usize, expected: usize },

    #[error("first-order slope ordering violated: margin {margin} for local minimum {state}")]
    SlopeOrderingViolated { margin: String, state: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
