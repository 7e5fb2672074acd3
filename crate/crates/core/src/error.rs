//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by algebra construction, state validation, the GNS
/// pipeline and the modular machinery.
#[derive(Debug, Error)]
pub enum Error {
    /// Block list empty or containing a non-positive size.
    #[error("invalid algebra spec: {0}")]
    InvalidSpec(String),

    /// Matrix-unit or block index out of range.
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    /// Two elements (or an element and a state) live on different block specs.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Tensor products and factor embeddings are only defined for
    /// single-block (simple) algebras.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// Embedding failed one of the *-homomorphism checks.
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    /// State weights are not Hermitian, not positive, or not normalized.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Vector expected to be unit norm deviates beyond tolerance.
    #[error("vector is not normalized: |norm - 1| = {deviation:.3e}")]
    NonUnitVector { deviation: f64 },

    /// Interpolation parameter outside [0, 1].
    #[error("lambda = {0} outside [0, 1]")]
    LambdaOutOfRange(f64),

    /// Orthonormalization or eigenvalue clustering failed beyond recovery.
    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),

    /// Modular data requested for a state with a nonempty null ideal.
    #[error("faithful state required: {0}")]
    FaithfulnessRequired(String),

    /// Gauge transformation requested for a non-unitary element.
    #[error("invalid unitary: ‖u*u - 1‖ = {deviation:.3e}")]
    InvalidUnitary { deviation: f64 },

    /// Projector family is not orthogonal, complete, or idempotent.
    #[error("invalid projector family: {0}")]
    InvalidFamily(String),

    /// Density operator failed Hermiticity or trace validation.
    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    /// Scenario file could not be read.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Scenario file could not be parsed.
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    /// Scenario parsed but failed cross-validation.
    #[error("scenario validation failed: {0}")]
    Scenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 1 for validation-type failures,
    /// 2 for numerical degeneracy.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NumericalDegeneracy(_) => 2,
            _ => 1,
        }
    }
}
