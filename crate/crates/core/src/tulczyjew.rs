//! Schrödinger dynamics generated by constrained quadratic Lagrangians.
//!
//! A Lagrangian `L(Q) = ½ g₀(Q, B Q)` on a constraint subspace `D₀ ⊆ R^{2n}`
//! of `(q, q̇)` space produces a Lagrangian subspace `S(L)` of `R^{4n}` with
//! coordinates `(q, q̇, ṗ, p)`. The Tulczyjew map reorders it to
//! `(q, p, q̇, ṗ)`, which is read as a relation `V(L)` in `C^n ⊕ C^n` through
//! `x = q + i p`, `ẋ = q̇ + i ṗ`. When `V(L)` is complex linear it is
//! anti-self-adjoint, and its integrability extract is the graph of
//! `-(i/ħ) A` with `A` the Schrödinger operator on its domain.
//!
//! At finite dimension closures are trivial: `D̄₀ = D₀` and `D̄ = D`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c64, kernel, spectral_decomp_hermitian, CMatrix, CVector, ComplexSubspace, RMatrix,
    RVector, RealSubspace, Tolerance,
};
use crate::relations::{self, FormKind, LinearRelation, OperatorWithDomain};

/// A coordinate constraint on `(q, q̇)` space. Indices are zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "index", rename_all = "camelCase")]
pub enum Constraint {
    /// `q̇^k = 0`.
    QdotZero(usize),
    /// `q^k = 0`.
    QZero(usize),
}

impl Constraint {
    pub fn index(self) -> usize {
        match self {
            Constraint::QdotZero(k) | Constraint::QZero(k) => k,
        }
    }

    /// Coordinate in the stacked `(q, q̇)` vector.
    fn coordinate(self, n: usize) -> usize {
        match self {
            Constraint::QZero(k) => k,
            Constraint::QdotZero(k) => n + k,
        }
    }
}

/// `L(Q) = ½ g₀(Q, B Q)` on `D₀ ⊆ R^{2n}`, with `B` given in the `D₀` frame.
#[derive(Clone, Debug)]
pub struct QuadraticLagrangian {
    n: usize,
    domain: RealSubspace,
    b: RMatrix,
    hbar: f64,
}

impl QuadraticLagrangian {
    pub fn new(n: usize, domain: RealSubspace, b: RMatrix, hbar: f64, tol: &Tolerance) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("configuration dimension must be positive".into()));
        }
        if domain.ambient_dim() != 2 * n {
            return Err(Error::DimensionMismatch(format!(
                "constraint subspace lives in R^{}, expected R^{}",
                domain.ambient_dim(),
                2 * n
            )));
        }
        if b.nrows() != domain.dim() || b.ncols() != domain.dim() {
            return Err(Error::DimensionMismatch(format!(
                "B is {}x{} but the constraint subspace has dimension {}",
                b.nrows(),
                b.ncols(),
                domain.dim()
            )));
        }
        crate::linalg::ensure_finite(&b)?;
        let scale = b.norm();
        if scale > 0.0 {
            let defect = (&b - b.transpose()).norm() / scale;
            if defect > tol.eq_tol {
                return Err(Error::NotSymmetric { defect });
            }
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")));
        }
        let b = (&b + b.transpose()) * 0.5;
        Ok(Self { n, domain, b, hbar })
    }

    /// Lagrangian given by an ambient symmetric `2n × 2n` matrix on `D₀`.
    pub fn from_ambient(n: usize, domain: RealSubspace, b_ambient: &RMatrix, hbar: f64, tol: &Tolerance) -> Result<Self> {
        if b_ambient.nrows() != 2 * n || b_ambient.ncols() != 2 * n {
            return Err(Error::DimensionMismatch(format!(
                "ambient B must be {0}x{0}, got {1}x{2}",
                2 * n,
                b_ambient.nrows(),
                b_ambient.ncols()
            )));
        }
        let f = domain.frame();
        let b = f.transpose() * b_ambient * f;
        Self::new(n, domain, b, hbar, tol)
    }

    /// `L = ½ Σ_k (q̇_k² / λ_k − λ_k q_k²)` with optional coordinate constraints.
    ///
    /// `None` stands for `λ = ∞` and needs a `q^k = 0` constraint; `λ = 0`
    /// needs `q̇^k = 0`.
    pub fn diagonal(
        lambdas: &[Option<f64>],
        constraints: &[Constraint],
        hbar: f64,
        tol: &Tolerance,
    ) -> Result<Self> {
        let n = lambdas.len();
        if n == 0 {
            return Err(Error::InvalidArgument("empty lambda list".into()));
        }
        if let Some(c) = constraints.iter().find(|c| c.index() >= n) {
            return Err(Error::DimensionMismatch(format!(
                "constraint index {} outside configuration dimension {n}",
                c.index()
            )));
        }
        let has = |c: Constraint| constraints.contains(&c);
        let mut diag = vec![0.0; 2 * n];
        for (k, lam) in lambdas.iter().enumerate() {
            match *lam {
                None => {
                    if !has(Constraint::QZero(k)) {
                        return Err(Error::InvalidArgument(format!(
                            "lambda_{k} = infinity requires the constraint q^{k} = 0"
                        )));
                    }
                }
                Some(l) if !l.is_finite() => return Err(Error::NonFinite),
                Some(l) if l == 0.0 => {
                    if !has(Constraint::QdotZero(k)) {
                        return Err(Error::InvalidArgument(format!(
                            "lambda_{k} = 0 requires the constraint qdot^{k} = 0"
                        )));
                    }
                }
                Some(l) => {
                    diag[k] = -l;
                    diag[n + k] = 1.0 / l;
                }
            }
        }
        let removed: Vec<usize> = constraints.iter().map(|c| c.coordinate(n)).collect();
        let kept: Vec<usize> = (0..2 * n).filter(|i| !removed.contains(i)).collect();
        let domain = RealSubspace::coordinate(2 * n, &kept)?;
        let b_ambient = RMatrix::from_diagonal(&RVector::from_vec(diag));
        Self::from_ambient(n, domain, &b_ambient, hbar, tol)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> &RealSubspace {
        &self.domain
    }

    /// `B` in the `D₀` frame.
    pub fn b(&self) -> &RMatrix {
        &self.b
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// `F B F^T`, acting as `B` on `D₀` and as zero on its complement.
    pub fn ambient_b(&self) -> RMatrix {
        let f = self.domain.frame();
        f * &self.b * f.transpose()
    }

    /// `L(q, q̇)` for `(q, q̇) ∈ D₀`.
    pub fn value(&self, q: &RVector, qdot: &RVector, tol: &Tolerance) -> Result<f64> {
        let big_q = stack_real(q, qdot, self.n)?;
        let r = self.domain.residual(&big_q);
        if r > tol.eq_tol * big_q.norm().max(1.0) {
            return Err(Error::NotInDomain { residual: r });
        }
        Ok(0.5 * big_q.dot(&(self.ambient_b() * &big_q)))
    }
}

fn stack_real(q: &RVector, qdot: &RVector, n: usize) -> Result<RVector> {
    if q.len() != n || qdot.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "configuration vectors of lengths {} and {} for n = {n}",
            q.len(),
            qdot.len()
        )));
    }
    let mut v = RVector::zeros(2 * n);
    v.rows_mut(0, n).copy_from(q);
    v.rows_mut(n, n).copy_from(qdot);
    Ok(v)
}

/// Matrix `Ω` of the canonical form `ω₀(v, w) = v^T Ω w = P·Q' − P'·Q` on
/// `(Q, P) = (q, q̇, ṗ, p)`.
pub fn omega0_matrix(n: usize) -> RMatrix {
    let m = 2 * n;
    let mut o = RMatrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        o[(i, m + i)] = -1.0;
        o[(m + i, i)] = 1.0;
    }
    o
}

pub fn omega0(v: &RVector, w: &RVector) -> Result<f64> {
    if v.len() != w.len() || !v.len().is_multiple_of(4) {
        return Err(Error::DimensionMismatch(format!(
            "omega0 arguments of lengths {} and {}",
            v.len(),
            w.len()
        )));
    }
    Ok(v.dot(&(omega0_matrix(v.len() / 4) * w)))
}

/// `ω₀`-orthogonal complement of a real subspace of `R^{4n}`.
pub fn omega0_complement(s: &RealSubspace, tol: &Tolerance) -> Result<RealSubspace> {
    let m = s.ambient_dim();
    if !m.is_multiple_of(4) {
        return Err(Error::DimensionMismatch(format!(
            "real ambient dimension {m} is not divisible by 4"
        )));
    }
    if s.is_trivial() {
        return Ok(RealSubspace::full(m));
    }
    Ok(kernel(&(s.frame().transpose() * omega0_matrix(m / 4)), tol))
}

pub fn is_omega0_lagrangian(s: &RealSubspace, tol: &Tolerance) -> Result<bool> {
    Ok(omega0_complement(s, tol)?.approx_eq(s, tol))
}

/// `S(L) = {(Q, B̂ Q + w) : Q ∈ D₀, w ∈ D₀^⊥}` in `(q, q̇, ṗ, p)` coordinates.
pub fn build_lagrangian_subspace(l: &QuadraticLagrangian, tol: &Tolerance) -> Result<RealSubspace> {
    let n = l.n;
    let m = 2 * n;
    let f = l.domain.frame();
    let k = f.ncols();
    let perp = l.domain.complement(tol);
    let mut g = RMatrix::zeros(2 * m, m);
    g.view_mut((0, 0), (m, k)).copy_from(f);
    g.view_mut((m, 0), (m, k)).copy_from(&(f * &l.b));
    g.view_mut((m, k), (m, perp.dim())).copy_from(perp.frame());
    let s = RealSubspace::span(&g, tol);
    if s.dim() != m {
        return Err(Error::DimensionMismatch(format!(
            "S(L) has dimension {} instead of {m}",
            s.dim()
        )));
    }
    Ok(s)
}

/// Block permutation `(q, q̇, ṗ, p) ↦ (q, p, q̇, ṗ)`.
pub fn alpha_inverse_matrix(n: usize) -> RMatrix {
    // Output block b takes input block src[b].
    block_permutation(n, [0, 3, 1, 2])
}

/// Block permutation `(q, p, q̇, ṗ) ↦ (q, q̇, ṗ, p)`.
pub fn alpha_matrix(n: usize) -> RMatrix {
    block_permutation(n, [0, 2, 3, 1])
}

fn block_permutation(n: usize, src: [usize; 4]) -> RMatrix {
    let mut p = RMatrix::zeros(4 * n, 4 * n);
    for (b, &s) in src.iter().enumerate() {
        for k in 0..n {
            p[(b * n + k, s * n + k)] = 1.0;
        }
    }
    p
}

fn quarter(s: &RealSubspace) -> Result<usize> {
    let m = s.ambient_dim();
    if !m.is_multiple_of(4) {
        return Err(Error::DimensionMismatch(format!(
            "real ambient dimension {m} is not divisible by 4"
        )));
    }
    Ok(m / 4)
}

/// Reorders a subspace of `(q, q̇, ṗ, p)` space into `(q, p, q̇, ṗ)` coordinates.
pub fn alpha_inverse(s: &RealSubspace) -> Result<RealSubspace> {
    let n = quarter(s)?;
    Ok(RealSubspace::from_frame_unchecked(alpha_inverse_matrix(n) * s.frame()))
}

/// Reorders a subspace of `(q, p, q̇, ṗ)` space into `(q, q̇, ṗ, p)` coordinates.
pub fn alpha(s: &RealSubspace) -> Result<RealSubspace> {
    let n = quarter(s)?;
    Ok(RealSubspace::from_frame_unchecked(alpha_matrix(n) * s.frame()))
}

/// Reads a real `(q, p, q̇, ṗ)` subspace as a relation in `C^n ⊕ C^n`.
///
/// Returns the complex span together with the complex-linearity flag. When
/// the flag is false the relation is strictly larger than the real input.
pub fn complexify(s: &RealSubspace, tol: &Tolerance) -> Result<(LinearRelation, bool)> {
    let linear = relations::is_complex_linear(s, tol)?;
    Ok((relations::complex_span(s, tol)?, linear))
}

/// Outcome of running the generation pipeline on a Lagrangian.
#[derive(Clone, Debug)]
pub struct DynamicsReport {
    /// `S(L)` in `(q, q̇, ṗ, p)` coordinates.
    pub sl: RealSubspace,
    pub vl: LinearRelation,
    pub complex_linear: bool,
    pub lagrangian_zero_plus: bool,
    /// `A` with `V(L)¹` the graph of `-(i/ħ) A`; absent unless `V(L)` is a
    /// complex-linear anti-self-adjoint relation.
    pub schroedinger: Option<OperatorWithDomain>,
    /// `D̄₀`, equal to `D₀` at finite dimension.
    pub constraint_closure: RealSubspace,
    pub hbar: f64,
}

impl DynamicsReport {
    pub fn is_graph(&self, tol: &Tolerance) -> bool {
        self.vl.is_graph(tol)
    }

    pub fn kernel_of_inverse(&self, tol: &Tolerance) -> ComplexSubspace {
        self.vl.kernel_of_inverse(tol)
    }

    pub fn domain(&self, tol: &Tolerance) -> ComplexSubspace {
        self.vl.domain(tol)
    }

    /// `V(L)¹ = V(L) ∩ (D ⊕ D)`.
    pub fn extract(&self, tol: &Tolerance) -> Result<LinearRelation> {
        self.vl.integrability_extract(tol)
    }
}

pub fn generate_dynamics(l: &QuadraticLagrangian, tol: &Tolerance) -> Result<DynamicsReport> {
    let sl = build_lagrangian_subspace(l, tol)?;
    let permuted = alpha_inverse(&sl)?;
    let (vl, complex_linear) = complexify(&permuted, tol)?;
    let lagrangian_zero_plus = complex_linear && vl.is_lagrangian(FormKind::ZeroPlus, tol);
    let schroedinger = if lagrangian_zero_plus {
        let g = vl.decompose_self_adjoint(FormKind::ZeroPlus, tol)?;
        // V(L)¹ is the graph of G = -(i/ħ) A, so A = iħ G.
        let matrix = &g.matrix * c64(0.0, l.hbar);
        let matrix = (&matrix + matrix.adjoint()) * c64(0.5, 0.0);
        Some(OperatorWithDomain::new(g.domain, g.closure, matrix)?)
    } else {
        None
    };
    Ok(DynamicsReport {
        sl,
        vl,
        complex_linear,
        lagrangian_zero_plus,
        schroedinger,
        constraint_closure: l.domain.clone(),
        hbar: l.hbar,
    })
}

/// `h(x) = Re<x, A x> / (2ħ)` for `x ∈ D`.
pub fn hamiltonian_value(a: &OperatorWithDomain, x: &CVector, hbar: f64, tol: &Tolerance) -> Result<f64> {
    check_hbar(hbar)?;
    let ax = a.apply(x, tol)?;
    Ok(x.dotc(&ax).re / (2.0 * hbar))
}

/// `{(x, -(i/ħ) A x + v) : x ∈ D, v ∈ D^⊥}`.
pub fn hamiltonian_relation(a: &OperatorWithDomain, hbar: f64, tol: &Tolerance) -> Result<LinearRelation> {
    check_hbar(hbar)?;
    Ok(a.scaled_relation(c64(0.0, -1.0 / hbar), tol))
}

fn check_hbar(hbar: f64) -> Result<()> {
    if hbar.is_finite() && hbar > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")))
    }
}

/// `(ħ²/2m)` times the Dirichlet second-difference matrix with unit spacing,
/// sign-flipped so the result is positive definite.
pub fn discretized_laplacian(grid_n: usize, mass: f64, hbar: f64) -> Result<RMatrix> {
    if grid_n < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid needs at least 2 points, got {grid_n}"
        )));
    }
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::InvalidArgument(format!("mass must be positive, got {mass}")));
    }
    check_hbar(hbar)?;
    let c = hbar * hbar / (2.0 * mass);
    Ok(RMatrix::from_fn(grid_n, grid_n, |i, j| {
        if i == j {
            2.0 * c
        } else if i.abs_diff(j) == 1 {
            -c
        } else {
            0.0
        }
    }))
}

/// `L(q, q̇) = ½ (q̇^T A^{-1} q̇ − q^T A q / ħ²)` for the discretized
/// Schrödinger operator `A` of a free particle.
pub fn discretized_laplacian_lagrangian(
    grid_n: usize,
    mass: f64,
    hbar: f64,
    tol: &Tolerance,
) -> Result<QuadraticLagrangian> {
    let a = discretized_laplacian(grid_n, mass, hbar)?;
    let a_inv = a
        .clone()
        .try_inverse()
        .ok_or(Error::Singular { smallest: 0.0, largest: a.norm() })?;
    let n = grid_n;
    let mut b = RMatrix::zeros(2 * n, 2 * n);
    b.view_mut((0, 0), (n, n)).copy_from(&(&a * (-1.0 / (hbar * hbar))));
    b.view_mut((n, n), (n, n)).copy_from(&a_inv);
    QuadraticLagrangian::from_ambient(n, RealSubspace::full(2 * n), &b, hbar, tol)
}

/// A diagonal Lagrangian written in an orthonormal eigenbasis `E` of a
/// Hermitian operator.
///
/// The Lagrangian lives in the coordinates `y = E^† x`; results of the
/// pipeline are carried back to `x` coordinates by `E`.
#[derive(Clone, Debug)]
pub struct SpectralLagrangian {
    pub lagrangian: QuadraticLagrangian,
    /// Unitary with the eigenvectors on the domain first, then a frame of `D^⊥`.
    pub basis: CMatrix,
}

impl SpectralLagrangian {
    pub fn generate_dynamics(&self, tol: &Tolerance) -> Result<DynamicsReport> {
        let r = generate_dynamics(&self.lagrangian, tol)?;
        let n = self.lagrangian.n;
        let e = &self.basis;
        let mut ee = CMatrix::zeros(2 * n, 2 * n);
        ee.view_mut((0, 0), (n, n)).copy_from(e);
        ee.view_mut((n, n), (n, n)).copy_from(e);
        let vl = r.vl.map(&ee, tol)?;
        let real = realify_unitary(e);
        let lift = alpha_matrix(n) * &real * alpha_inverse_matrix(n);
        let sl = RealSubspace::from_frame_unchecked(lift * r.sl.frame());
        let schroedinger = match r.schroedinger {
            Some(op) => {
                let amb = e * op.ambient_matrix() * e.adjoint();
                let dom = ComplexSubspace::from_frame_unchecked(e * op.domain.frame());
                Some(OperatorWithDomain::restrict(&amb, dom, tol)?)
            }
            None => None,
        };
        Ok(DynamicsReport {
            sl,
            vl,
            schroedinger,
            ..r
        })
    }
}

/// Real `4n × 4n` matrix of `E ⊕ E` acting on `(q, p, q̇, ṗ)`.
fn realify_unitary(e: &CMatrix) -> RMatrix {
    let n = e.nrows();
    let er = e.map(|z| z.re);
    let ei = e.map(|z| z.im);
    let mut r = RMatrix::zeros(4 * n, 4 * n);
    for off in [0, 2 * n] {
        r.view_mut((off, off), (n, n)).copy_from(&er);
        r.view_mut((off, off + n), (n, n)).copy_from(&(-&ei));
        r.view_mut((off + n, off), (n, n)).copy_from(&ei);
        r.view_mut((off + n, off + n), (n, n)).copy_from(&er);
    }
    r
}

/// Lagrangian whose generated dynamics is `A` on its domain.
///
/// Diagonalizes `A` on `D`; nonzero eigenvalues `μ` contribute oscillator
/// terms with `λ = μ/ħ`, zero eigenvalues a `q̇ = 0` constraint, and
/// directions of `D^⊥` a `q = 0` constraint.
pub fn lagrangian_of(a: &OperatorWithDomain, hbar: f64, tol: &Tolerance) -> Result<SpectralLagrangian> {
    check_hbar(hbar)?;
    if !a.closure_is_domain(tol) {
        return Err(Error::InvalidArgument(
            "operator must map its domain into itself".into(),
        ));
    }
    let compressed = a.domain_matrix();
    let eig = spectral_decomp_hermitian(&compressed, tol)?;
    let n = a.n();
    let k = a.domain.dim();
    let perp = a.domain.complement(tol);
    let mut basis = CMatrix::zeros(n, n);
    basis
        .columns_mut(0, k)
        .copy_from(&(a.domain.frame() * &eig.eigenvectors));
    basis.columns_mut(k, n - k).copy_from(perp.frame());
    let scale = compressed.norm().max(f64::MIN_POSITIVE);
    let mut lambdas = Vec::with_capacity(n);
    let mut constraints = Vec::new();
    for (j, &mu) in eig.eigenvalues.iter().enumerate() {
        if mu.abs() <= tol.rank_tol * scale {
            lambdas.push(Some(0.0));
            constraints.push(Constraint::QdotZero(j));
        } else {
            lambdas.push(Some(mu / hbar));
        }
    }
    for j in k..n {
        lambdas.push(None);
        constraints.push(Constraint::QZero(j));
    }
    Ok(SpectralLagrangian {
        lagrangian: QuadraticLagrangian::diagonal(&lambdas, &constraints, hbar, tol)?,
        basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn cdiag(d: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_iterator(d.len(), d.iter().map(|&x| c64(x, 0.0))))
    }

    fn real_span(n: usize, cols: &[&[f64]]) -> RealSubspace {
        let vs: Vec<RVector> = cols.iter().map(|c| RVector::from_column_slice(c)).collect();
        crate::linalg::orthonormalize(&vs, 4 * n, &tol()).unwrap()
    }

    #[test]
    fn example_one_subspace_single_mode() {
        let l = QuadraticLagrangian::diagonal(&[Some(2.0)], &[], 1.0, &tol()).unwrap();
        let s = build_lagrangian_subspace(&l, &tol()).unwrap();
        let expected = real_span(1, &[&[1.0, 0.0, -2.0, 0.0], &[0.0, 1.0, 0.0, 0.5]]);
        assert!(s.approx_eq(&expected, &tol()));
        assert!(is_omega0_lagrangian(&s, &tol()).unwrap());
    }

    #[test]
    fn zero_lagrangian_gives_zero_section() {
        let n = 2;
        let l = QuadraticLagrangian::new(n, RealSubspace::full(2 * n), RMatrix::zeros(4, 4), 1.0, &tol()).unwrap();
        let s = build_lagrangian_subspace(&l, &tol()).unwrap();
        assert!(s.approx_eq(&RealSubspace::coordinate(8, &[0, 1, 2, 3]).unwrap(), &tol()));
    }

    #[test]
    fn constrained_velocity_adds_momentum_direction() {
        let lam = 3.0;
        let domain = RealSubspace::coordinate(2, &[0]).unwrap();
        let l = QuadraticLagrangian::new(1, domain, RMatrix::from_element(1, 1, -lam), 1.0, &tol()).unwrap();
        let s = build_lagrangian_subspace(&l, &tol()).unwrap();
        let expected = real_span(1, &[&[1.0, 0.0, -lam, 0.0], &[0.0, 0.0, 0.0, 1.0]]);
        assert!(s.approx_eq(&expected, &tol()));
        assert!(is_omega0_lagrangian(&s, &tol()).unwrap());
    }

    #[test]
    fn asymmetric_b_is_rejected() {
        let b = RMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(
            QuadraticLagrangian::new(1, RealSubspace::full(2), b, 1.0, &tol()),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn alpha_permutation_algebra() {
        let n = 1;
        let v = RVector::from_vec(vec![1.0, 0.0, -2.0, 0.0]);
        assert_eq!(alpha_inverse_matrix(n) * &v, RVector::from_vec(vec![1.0, 0.0, 0.0, -2.0]));
        let id = RMatrix::identity(8, 8);
        assert_eq!(alpha_matrix(2) * alpha_inverse_matrix(2), id);
        let twice = alpha_inverse_matrix(2) * alpha_inverse_matrix(2);
        assert_ne!(twice, id);
        assert_eq!(alpha_inverse(&RealSubspace::trivial(8)).unwrap().dim(), 0);
        assert!(alpha_inverse(&RealSubspace::trivial(6)).is_err());
    }

    #[test]
    fn example_one_complexifies_to_graph() {
        let v = real_span(1, &[&[1.0, 0.0, 0.0, -2.0], &[0.0, 0.5, 1.0, 0.0]]);
        let (rel, linear) = complexify(&v, &tol()).unwrap();
        assert!(linear);
        let expected = LinearRelation::graph(&CMatrix::from_element(1, 1, c64(0.0, -2.0)), &tol()).unwrap();
        assert!(rel.approx_eq(&expected, &tol()));
        let (zero, _) = complexify(&RealSubspace::trivial(4), &tol()).unwrap();
        assert_eq!(zero.dim(), 0);
    }

    #[test]
    fn example_one_truncated() {
        let l = QuadraticLagrangian::diagonal(&[Some(1.0), Some(2.0), Some(3.0)], &[], 1.0, &tol()).unwrap();
        let r = generate_dynamics(&l, &tol()).unwrap();
        assert!(r.complex_linear && r.lagrangian_zero_plus);
        let a = r.schroedinger.unwrap();
        assert!(a.domain.is_full());
        assert!((a.ambient_matrix() - cdiag(&[1.0, 2.0, 3.0])).norm() < 1e-9);
    }

    #[test]
    fn example_one_scales_with_hbar() {
        let l = QuadraticLagrangian::diagonal(&[Some(1.0), Some(2.0)], &[], 0.5, &tol()).unwrap();
        let a = generate_dynamics(&l, &tol()).unwrap().schroedinger.unwrap();
        assert!((a.ambient_matrix() - cdiag(&[0.5, 1.0])).norm() < 1e-9);
    }

    #[test]
    fn example_two_zero_mode() {
        let l = QuadraticLagrangian::diagonal(
            &[Some(0.0), Some(2.0), Some(3.0)],
            &[Constraint::QdotZero(0)],
            1.0,
            &tol(),
        )
        .unwrap();
        let r = generate_dynamics(&l, &tol()).unwrap();
        let a = r.schroedinger.unwrap();
        assert!(a.domain.is_full());
        assert!((a.ambient_matrix() - cdiag(&[0.0, 2.0, 3.0])).norm() < 1e-9);
        assert!(r.vl.is_graph(&tol()));
    }

    #[test]
    fn example_three_infinite_mode() {
        let l = QuadraticLagrangian::diagonal(
            &[None, Some(2.0), Some(3.0)],
            &[Constraint::QZero(0)],
            1.0,
            &tol(),
        )
        .unwrap();
        let r = generate_dynamics(&l, &tol()).unwrap();
        assert!(!r.is_graph(&tol()));
        let e1 = ComplexSubspace::coordinate(3, &[0]).unwrap();
        let perp = ComplexSubspace::coordinate(3, &[1, 2]).unwrap();
        assert!(r.kernel_of_inverse(&tol()).approx_eq(&e1, &tol()));
        assert!(r.domain(&tol()).approx_eq(&perp, &tol()));
        let g = cdiag(&[0.0, 2.0, 3.0]) * c64(0.0, -1.0);
        let expected = LinearRelation::graph_on(&perp, &g, &tol()).unwrap();
        assert!(r.extract(&tol()).unwrap().approx_eq(&expected, &tol()));
        let a = r.schroedinger.unwrap();
        let h = hamiltonian_relation(&a, 1.0, &tol()).unwrap();
        assert!(h.approx_eq(&r.vl, &tol()));
    }

    #[test]
    fn missing_constraint_is_rejected() {
        assert!(QuadraticLagrangian::diagonal(&[None], &[], 1.0, &tol()).is_err());
        assert!(QuadraticLagrangian::diagonal(&[Some(0.0)], &[], 1.0, &tol()).is_err());
        assert!(QuadraticLagrangian::diagonal(&[Some(1.0)], &[Constraint::QZero(3)], 1.0, &tol()).is_err());
    }

    #[test]
    fn hamiltonian_values() {
        let a = OperatorWithDomain::full(&cdiag(&[1.0, 3.0])).unwrap();
        let s = 0.5f64.sqrt();
        let x = CVector::from_vec(vec![c64(s, 0.0), c64(s, 0.0)]);
        assert_relative_eq!(hamiltonian_value(&a, &x, 1.0, &tol()).unwrap(), 1.0, epsilon = 1e-14);
        let e2 = CVector::from_vec(vec![c64(0.0, 0.0), c64(0.0, 1.0)]);
        assert_relative_eq!(hamiltonian_value(&a, &e2, 2.0, &tol()).unwrap(), 0.75, epsilon = 1e-14);
    }

    #[test]
    fn hamiltonian_value_outside_domain() {
        let d = ComplexSubspace::coordinate(2, &[1]).unwrap();
        let a = OperatorWithDomain::restrict(&cdiag(&[0.0, 2.0]), d, &tol()).unwrap();
        let x = CVector::from_vec(vec![c64(1.0, 0.0), c64(0.0, 0.0)]);
        assert!(matches!(
            hamiltonian_value(&a, &x, 1.0, &tol()),
            Err(Error::NotInDomain { .. })
        ));
    }

    #[test]
    fn laplacian_two_point_grid() {
        let a = discretized_laplacian(2, 1.0, 1.0).unwrap();
        assert_eq!(a, RMatrix::from_row_slice(2, 2, &[1.0, -0.5, -0.5, 1.0]));
        let inv = a.try_inverse().unwrap();
        let expected = RMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]) * (2.0 / 3.0);
        assert!((inv - expected).norm() < 1e-14);
        assert!(discretized_laplacian(1, 1.0, 1.0).is_err());
    }

    #[test]
    fn laplacian_pipeline_recovers_operator() {
        let n = 6;
        let l = discretized_laplacian_lagrangian(n, 0.7, 1.0, &tol()).unwrap();
        let a = generate_dynamics(&l, &tol()).unwrap().schroedinger.unwrap();
        let expected = crate::linalg::complexify_matrix(&discretized_laplacian(n, 0.7, 1.0).unwrap());
        assert!((a.ambient_matrix() - &expected).norm() <= 10.0 * 1e-9 * expected.norm());
    }

    #[test]
    fn laplacian_with_physical_hbar_is_not_complex_linear() {
        let l = discretized_laplacian_lagrangian(4, 1.0, 0.5, &tol()).unwrap();
        let r = generate_dynamics(&l, &tol()).unwrap();
        assert!(!r.complex_linear);
        assert!(r.schroedinger.is_none());
    }

    #[test]
    fn spectral_lagrangian_round_trip() {
        let a = CMatrix::from_row_slice(
            3,
            3,
            &[
                c64(1.0, 0.0), c64(0.5, 0.5), c64(0.0, 0.0),
                c64(0.5, -0.5), c64(-2.0, 0.0), c64(0.0, 1.0),
                c64(0.0, 0.0), c64(0.0, -1.0), c64(0.3, 0.0),
            ],
        );
        let op = OperatorWithDomain::full(&a).unwrap();
        let sl = lagrangian_of(&op, 1.3, &tol()).unwrap();
        let r = sl.generate_dynamics(&tol()).unwrap();
        let got = r.schroedinger.unwrap();
        assert!((got.ambient_matrix() - a).norm() < 1e-9);
        assert!(is_omega0_lagrangian(&r.sl, &tol()).unwrap());
    }
}
