//! Finite-dimensional geometric quantum dynamics.
//!
//! The crate works on truncations `H = C^n` of a separable Hilbert space and
//! collects the linear-algebraic machinery needed to treat quantum dynamics
//! geometrically:
//!
//! - [`linalg`]: orthonormal frames, subspace algebra, spectral and polar
//!   decompositions, Schatten norms.
//! - [`relations`]: linear relations in `H ⊕ H`, the Hermitian forms on it,
//!   isotropy and Lagrangian tests, self-adjoint decomposition.
//! - [`tulczyjew`]: Schrödinger operators generated from constrained
//!   quadratic Lagrangians.
//! - [`extensions`]: the Cayley transform, deficiency spaces and
//!   self-adjoint extensions of symmetric relations.
//! - [`projective`]: the Kähler geometry of pure states.
//! - [`orbits`]: density matrices, unitary orbits and the local orbit
//!   embedding.
//! - [`evolution`]: Schrödinger and Heisenberg evolution, Euler–Lagrange
//!   residuals.

pub mod error;
pub mod evolution;
pub mod extensions;
pub mod json;
pub mod linalg;
pub mod orbits;
pub mod projective;
pub mod relations;
pub mod sampling;
pub mod tulczyjew;

pub use error::{Error, Result};
pub use extensions::{CayleyData, DeficiencyReport};
pub use linalg::{
    c64, CMatrix, CVector, ComplexSubspace, Field, RMatrix, RVector, RealSubspace, Subspace,
    Tolerance, C64,
};
pub use orbits::{DensityMatrix, SpectralResolution};
pub use projective::{ProjTangent, PureState};
pub use relations::{FormKind, LinearRelation, OperatorWithDomain};
pub use tulczyjew::{Constraint, DynamicsReport, QuadraticLagrangian, SpectralLagrangian};

