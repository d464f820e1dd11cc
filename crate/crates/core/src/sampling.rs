//! Seeded random instances for tests, benchmarks and scenario sweeps.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

use crate::linalg::{
    c64, CMatrix, CVector, ComplexSubspace, RMatrix, RealSubspace, Subspace, Tolerance, C64,
};
use crate::orbits::DensityMatrix;
use crate::relations::{LinearRelation, OperatorWithDomain};

pub fn seeded_rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Standard complex Gaussian with `E|z|² = 1`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    c64(s * normal(rng), s * normal(rng))
}

pub fn random_cvector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| complex_normal(rng))
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    loop {
        let v = random_cvector(rng, n);
        let norm = v.norm();
        if norm > 1e-6 {
            return v / c64(norm, 0.0);
        }
    }
}

pub fn random_cmatrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn random_rmatrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> RMatrix {
    RMatrix::from_fn(rows, cols, |_, _| normal(rng))
}

/// `(G + G^†) / 2` for a complex Gaussian `G`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = random_cmatrix(rng, n, n);
    (&g + g.adjoint()) * c64(0.5, 0.0)
}

/// Haar-distributed unitary from the QR factorization of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let qr = random_cmatrix(rng, n, n).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / c64(d.norm(), 0.0) } else { c64(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `exp(i ε H)` for a random Hermitian `H` of unit operator norm.
pub fn random_near_identity_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize, eps: f64) -> CMatrix {
    let h = random_hermitian(rng, n);
    let tol = Tolerance::default();
    let eig = crate::linalg::spectral_decomp_hermitian(&h, &tol).expect("Hermitian by construction");
    let scale = eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |m, l| m.max(l.abs()))
        .max(f64::MIN_POSITIVE);
    eig.apply_function(|l| C64::from_polar(1.0, eps * l / scale))
}

/// Random `k`-dimensional complex subspace of `C^n`.
pub fn random_subspace<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> ComplexSubspace {
    assert!(k <= n, "subspace dimension {k} exceeds ambient {n}");
    let u = random_unitary(rng, n);
    Subspace::from_frame_unchecked(u.columns(0, k).into_owned())
}

pub fn random_real_subspace<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> RealSubspace {
    assert!(k <= n, "subspace dimension {k} exceeds ambient {n}");
    let q = random_rmatrix(rng, n, n).qr().q();
    Subspace::from_frame_unchecked(q.columns(0, k).into_owned())
}

/// `U diag(p) U^†` with `p` uniform on the simplex restricted to `rank` entries.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> DensityMatrix {
    assert!(rank >= 1 && rank <= n, "rank {rank} out of range for dimension {n}");
    let mut p: Vec<f64> = (0..rank).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let s: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= s);
    p.resize(n, 0.0);
    let u = random_unitary(rng, n);
    let d = CMatrix::from_diagonal(&CVector::from_iterator(n, p.iter().map(|&x| c64(x, 0.0))));
    let rho = &u * d * u.adjoint();
    let rho = (&rho + rho.adjoint()) * c64(0.5, 0.0);
    let rho = &rho / rho.trace();
    DensityMatrix::new(rho, &Tolerance::default()).expect("valid by construction")
}

/// Density matrix with prescribed eigenvalues in a random basis.
pub fn random_density_with_spectrum<R: Rng + ?Sized>(rng: &mut R, spectrum: &[f64]) -> Option<DensityMatrix> {
    let n = spectrum.len();
    let u = random_unitary(rng, n);
    let d = CMatrix::from_diagonal(&CVector::from_iterator(n, spectrum.iter().map(|&x| c64(x, 0.0))));
    let rho = &u * d * u.adjoint();
    DensityMatrix::new((&rho + rho.adjoint()) * c64(0.5, 0.0), &Tolerance::default()).ok()
}

/// Hermitian operator on a random `k`-dimensional domain.
pub fn random_hermitian_on_domain<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> OperatorWithDomain {
    let d = random_subspace(rng, n, k);
    let m = random_hermitian(rng, k);
    OperatorWithDomain::new(d.clone(), d, m).expect("consistent dimensions")
}

/// Symmetric operator whose images leave its domain: `F_D^† (P_T H P_T)`
/// restricted to a random domain `D` of dimension `k` inside a random
/// target `T` of dimension `m ≥ k`.
pub fn random_symmetric_operator<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    k: usize,
    m: usize,
) -> OperatorWithDomain {
    assert!(k <= m && m <= n, "need k <= m <= n, got {k}, {m}, {n}");
    let u = random_unitary(rng, n);
    let target = u.columns(0, m).into_owned();
    let domain = u.columns(0, k).into_owned();
    let h = random_hermitian(rng, m);
    // Coordinates of A on D against the target frame.
    let matrix = h.columns(0, k).into_owned();
    OperatorWithDomain::new(
        Subspace::from_frame_unchecked(domain),
        Subspace::from_frame_unchecked(target),
        matrix,
    )
    .expect("consistent dimensions")
}

/// `{(x, A x + v) : x ∈ D, v ∈ D^⊥}` for a random Hermitian `A` and domain `D`,
/// which is Lagrangian for the zero-minus form.
pub fn random_self_adjoint_relation<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> LinearRelation {
    let a = random_hermitian_on_domain(rng, n, k);
    a.scaled_relation(c64(1.0, 0.0), &Tolerance::default())
}
