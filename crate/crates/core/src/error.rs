use thiserror::Error;

use crate::relations::FormKind;

/// Errors raised by the geometric quantum dynamics toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (relative defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not symmetric (relative defect {defect:.3e})")]
    NotSymmetric { defect: f64 },

    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("matrix is singular to working precision (smallest singular value {smallest:.3e}, largest {largest:.3e})")]
    Singular { smallest: f64, largest: f64 },

    #[error("Schatten exponent must satisfy p >= 1, got {0}")]
    InvalidExponent(f64),

    #[error("relation is not Lagrangian for the {0} form")]
    NotLagrangian(FormKind),

    #[error("relation is not isotropic for the {0} form")]
    NotIsotropic(FormKind),

    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,

    #[error("vector lies outside the operator domain (residual {residual:.3e})")]
    NotInDomain { residual: f64 },

    #[error("tangent direction is not orthogonal to the base vector (overlap {overlap:.3e})")]
    NotOrthogonal { overlap: f64 },

    #[error("tangent vectors are attached to different pure states")]
    BaseMismatch,

    #[error("density matrices lie on different unitary orbits")]
    OrbitMismatch,

    #[error("spectral projections too far apart for the local embedding (sum of distances {sum:.4} > 1/2)")]
    ProximityViolated { sum: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("malformed sequence: {0}")]
    MalformedSequence(String),

    #[error("time grid too coarse: {points} points, at least 5 required")]
    GridTooCoarse { points: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite entry in input")]
    NonFinite,

    #[error("singular value decomposition did not converge")]
    NoConvergence,
}

pub type Result<T> = std::result::Result<T, Error>;
