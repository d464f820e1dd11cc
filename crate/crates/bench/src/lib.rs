//! Seeded inputs shared by the benchmarks.

use gqd_core::sampling::{random_density, random_near_identity_unitary, random_self_adjoint_relation, seeded_rng};
use gqd_core::{c64, CMatrix, DensityMatrix, LinearRelation, QuadraticLagrangian, Tolerance};

/// `diag(1, …, n)` as an unconstrained Lagrangian.
pub fn diagonal_lagrangian(n: usize) -> QuadraticLagrangian {
    let lambda: Vec<Option<f64>> = (1..=n).map(|k| Some(k as f64)).collect();
    QuadraticLagrangian::diagonal(&lambda, &[], 1.0, &Tolerance::default()).expect("valid diagonal")
}

/// `span{(e₁, 2e₁)}` in `C² ⊕ C²`.
pub fn model_relation() -> LinearRelation {
    let z = c64(0.0, 0.0);
    let g = CMatrix::from_column_slice(4, 1, &[c64(1.0, 0.0), z, c64(2.0, 0.0), z]);
    LinearRelation::span(2, &g, &Tolerance::default()).expect("valid generator")
}

/// Self-adjoint relation on `C^n` with a `k`-dimensional domain.
pub fn self_adjoint_relation(n: usize, k: usize, seed: u64) -> LinearRelation {
    random_self_adjoint_relation(&mut seeded_rng(seed), n, k)
}

/// Full-rank state and a nearby point on its orbit.
pub fn orbit_pair(n: usize, seed: u64) -> (DensityMatrix, DensityMatrix) {
    let mut rng = seeded_rng(seed);
    let rho = random_density(&mut rng, n, n);
    let v = random_near_identity_unitary(&mut rng, n, 1e-3);
    let c = rho.conjugate(&v);
    let rho_p = DensityMatrix::new((&c + c.adjoint()) * c64(0.5, 0.0), &Tolerance::default()).expect("valid state");
    (rho, rho_p)
}
