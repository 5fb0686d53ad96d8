use thiserror::Error;

/// Errors produced by the core engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry in {what}")]
    NonFinite { what: &'static str },

    #[error("operator is not Hermitian (max |A - A^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid density matrix: {reason} ({value:e})")]
    InvalidDensityMatrix { reason: &'static str, value: f64 },

    #[error("state vector is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("Bloch vector does not describe a pure state (|r| = {norm})")]
    MixedState { norm: f64 },

    #[error("Markovianity violated: negative rate {rate:e}")]
    NegativeRate { rate: f64 },

    #[error("Markovianity violated: noise coefficient matrix has eigenvalue {min_eigenvalue:e}")]
    NonMarkovian { min_eigenvalue: f64 },

    #[error("matrix exponential did not converge (1-norm {norm:e}, scaling depth {scaling_depth})")]
    ExpmNonConvergence { norm: f64, scaling_depth: u32 },

    #[error("singular matrix in linear solve")]
    Singular,

    #[error("numerical inconsistency: imaginary part {imaginary:e} in a real quantity")]
    NumericalInconsistency { imaginary: f64 },

    #[error("survival probability is zero, effective rate is infinite")]
    InfiniteRate,

    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("condition inapplicable: {what}")]
    ConditionInapplicable { what: &'static str },

    #[error("resonance condition violated (worst phase deviation {worst_deviation:e})")]
    ResonanceViolation { worst_deviation: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
