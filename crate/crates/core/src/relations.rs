//! Linear relations `V ⊆ H ⊕ H` with `H = C^n`.
//!
//! Vectors of the doubled space are stacked as `(x, ẋ)`: the first `n`
//! coordinates are the `x` block, the last `n` the `ẋ` block. All
//! classification (graph, isotropic, Lagrangian) is recomputed from the frame
//! on every call.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c64, hermitian_defect, right_divide, CMatrix, CVector, ComplexSubspace, RMatrix,
    RealSubspace, Tolerance,
};

/// The five Hermitian forms on `H ⊕ H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum FormKind {
    /// `<x, y'> + <ẋ, y>`; its Lagrangian subspaces are the anti-self-adjoint relations.
    ZeroPlus,
    /// `i(<ẋ, y> - <x, y'>)`; its Lagrangian subspaces are the self-adjoint relations.
    ZeroMinus,
    /// `<x, y> + <ẋ, y'>`.
    Plus,
    /// `<ẋ, y'> - <x, y>`.
    Minus,
    /// The ambient Hermitian product.
    Standard,
}

impl FormKind {
    pub const ALL: [FormKind; 5] = [
        FormKind::ZeroPlus,
        FormKind::ZeroMinus,
        FormKind::Plus,
        FormKind::Minus,
        FormKind::Standard,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormKind::ZeroPlus => "zeroPlus",
            FormKind::ZeroMinus => "zeroMinus",
            FormKind::Plus => "plus",
            FormKind::Minus => "minus",
            FormKind::Standard => "standard",
        }
    }
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Gram matrix `G` with `form(v, w) = v^† G w`.
pub fn gram_matrix(kind: FormKind, n: usize) -> CMatrix {
    let mut g = CMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        match kind {
            FormKind::ZeroPlus => {
                g[(k, n + k)] = c64(1.0, 0.0);
                g[(n + k, k)] = c64(1.0, 0.0);
            }
            FormKind::ZeroMinus => {
                g[(k, n + k)] = c64(0.0, -1.0);
                g[(n + k, k)] = c64(0.0, 1.0);
            }
            FormKind::Plus | FormKind::Standard => {
                g[(k, k)] = c64(1.0, 0.0);
                g[(n + k, n + k)] = c64(1.0, 0.0);
            }
            FormKind::Minus => {
                g[(k, k)] = c64(-1.0, 0.0);
                g[(n + k, n + k)] = c64(1.0, 0.0);
            }
        }
    }
    g
}

fn check_pair(v: &CVector, w: &CVector) -> Result<usize> {
    if v.len() != w.len() || !v.len().is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!(
            "form arguments of length {} and {} (both must be 2n)",
            v.len(),
            w.len()
        )));
    }
    Ok(v.len() / 2)
}

/// `v^† G w`, computed blockwise without forming `G`.
pub fn form_value(kind: FormKind, v: &CVector, w: &CVector) -> Result<crate::linalg::C64> {
    let n = check_pair(v, w)?;
    let (vx, vy) = (v.rows(0, n), v.rows(n, n));
    let (wx, wy) = (w.rows(0, n), w.rows(n, n));
    Ok(match kind {
        FormKind::ZeroPlus => vx.dotc(&wy) + vy.dotc(&wx),
        FormKind::ZeroMinus => c64(0.0, 1.0) * (vy.dotc(&wx) - vx.dotc(&wy)),
        FormKind::Plus | FormKind::Standard => vx.dotc(&wx) + vy.dotc(&wy),
        FormKind::Minus => vy.dotc(&wy) - vx.dotc(&wx),
    })
}

/// `-Im form(v, w)`.
pub fn symplectic_value(kind: FormKind, v: &CVector, w: &CVector) -> Result<f64> {
    Ok(-form_value(kind, v, w)?.im)
}

/// Stacks two blocks of length `n` into one vector of `C^{2n}`.
pub fn stack(x: &CVector, y: &CVector) -> CVector {
    let n = x.len();
    let mut v = CVector::zeros(n + y.len());
    v.rows_mut(0, n).copy_from(x);
    v.rows_mut(n, y.len()).copy_from(y);
    v
}

/// A complex subspace of `C^n ⊕ C^n`.
#[derive(Clone, Debug)]
pub struct LinearRelation {
    n: usize,
    space: ComplexSubspace,
}

impl LinearRelation {
    pub fn from_subspace(n: usize, space: ComplexSubspace) -> Result<Self> {
        if space.ambient_dim() != 2 * n {
            return Err(Error::DimensionMismatch(format!(
                "relation in C^{n} ⊕ C^{n} needs ambient dimension {}, got {}",
                2 * n,
                space.ambient_dim()
            )));
        }
        Ok(Self { n, space })
    }

    /// Span of the columns of `generators` (each of length `2n`).
    pub fn span(n: usize, generators: &CMatrix, tol: &Tolerance) -> Result<Self> {
        if generators.nrows() != 2 * n {
            return Err(Error::DimensionMismatch(format!(
                "generators of length {} for relation in C^{n} ⊕ C^{n}",
                generators.nrows()
            )));
        }
        crate::linalg::ensure_finite(generators)?;
        Ok(Self {
            n,
            space: ComplexSubspace::span(generators, tol),
        })
    }

    /// Span of the pairs `(x_j, y_j)`.
    pub fn from_pairs(n: usize, pairs: &[(CVector, CVector)], tol: &Tolerance) -> Result<Self> {
        let mut g = CMatrix::zeros(2 * n, pairs.len());
        for (j, (x, y)) in pairs.iter().enumerate() {
            if x.len() != n || y.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "pair of lengths ({}, {}) in relation over C^{n}",
                    x.len(),
                    y.len()
                )));
            }
            g.view_mut((0, j), (n, 1)).copy_from(x);
            g.view_mut((n, j), (n, 1)).copy_from(y);
        }
        Self::span(n, &g, tol)
    }

    pub fn trivial(n: usize) -> Self {
        Self {
            n,
            space: ComplexSubspace::trivial(2 * n),
        }
    }

    /// `C^n ⊕ {0}`, the graph of the zero operator.
    pub fn zero_operator(n: usize) -> Self {
        Self::graph(&CMatrix::zeros(n, n), &Tolerance::default()).expect("square")
    }

    /// `{0} ⊕ C^n`.
    pub fn pure_kernel(n: usize) -> Self {
        let coords: Vec<usize> = (n..2 * n).collect();
        Self {
            n,
            space: ComplexSubspace::coordinate(2 * n, &coords).expect("in range"),
        }
    }

    /// Graph of a full-domain operator.
    pub fn graph(a: &CMatrix, tol: &Tolerance) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "graph of a {}x{} matrix",
                a.nrows(),
                a.ncols()
            )));
        }
        let n = a.nrows();
        Self::graph_on(&ComplexSubspace::full(n), a, tol)
    }

    /// `{(x, A x) : x ∈ D}` for an ambient matrix `A`.
    pub fn graph_on(domain: &ComplexSubspace, a: &CMatrix, tol: &Tolerance) -> Result<Self> {
        let n = domain.ambient_dim();
        if a.nrows() != n || a.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "operator of size {}x{} on a domain in C^{n}",
                a.nrows(),
                a.ncols()
            )));
        }
        let f = domain.frame();
        let mut g = CMatrix::zeros(2 * n, f.ncols());
        g.rows_mut(0, n).copy_from(f);
        g.rows_mut(n, n).copy_from(&(a * f));
        Self::span(n, &g, tol)
    }

    /// `{(x, A x + v) : x ∈ D, v ∈ D^⊥}`, the general (anti) self-adjoint form.
    pub fn with_orthogonal_kernel(
        domain: &ComplexSubspace,
        a: &CMatrix,
        tol: &Tolerance,
    ) -> Result<Self> {
        let n = domain.ambient_dim();
        let g = Self::graph_on(domain, a, tol)?;
        let perp = domain.complement(tol);
        let mut k = CMatrix::zeros(2 * n, perp.dim());
        k.rows_mut(n, n).copy_from(perp.frame());
        let kern = Self::span(n, &k, tol)?;
        g.sum(&kern, tol)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &ComplexSubspace {
        &self.space
    }

    pub fn frame(&self) -> &CMatrix {
        self.space.frame()
    }

    pub fn top(&self) -> CMatrix {
        self.frame().rows(0, self.n).into_owned()
    }

    pub fn bottom(&self) -> CMatrix {
        self.frame().rows(self.n, self.n).into_owned()
    }

    pub fn sum(&self, other: &Self, tol: &Tolerance) -> Result<Self> {
        Self::from_subspace(self.n, self.space.sum(&other.space, tol)?)
    }

    pub fn intersection(&self, other: &Self, tol: &Tolerance) -> Result<Self> {
        Self::from_subspace(self.n, self.space.intersection(&other.space, tol)?)
    }

    pub fn contains(&self, other: &Self, tol: &Tolerance) -> bool {
        self.space.contains(&other.space, tol)
    }

    pub fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool {
        self.n == other.n && self.space.approx_eq(&other.space, tol)
    }

    /// Frobenius distance between the orthogonal projectors.
    pub fn distance(&self, other: &Self) -> f64 {
        self.space.distance(&other.space)
    }

    /// `{w : form(v, w) = 0 for all v ∈ V}`.
    pub fn ortho_complement(&self, kind: FormKind, tol: &Tolerance) -> Self {
        let g = gram_matrix(kind, self.n);
        if self.space.is_trivial() {
            return Self {
                n: self.n,
                space: ComplexSubspace::full(2 * self.n),
            };
        }
        let m = self.frame().adjoint() * g;
        Self {
            n: self.n,
            space: crate::linalg::kernel(&m, tol),
        }
    }

    pub fn is_isotropic(&self, kind: FormKind, tol: &Tolerance) -> bool {
        self.ortho_complement(kind, tol).contains(self, tol)
    }

    pub fn is_lagrangian(&self, kind: FormKind, tol: &Tolerance) -> bool {
        self.ortho_complement(kind, tol).approx_eq(self, tol)
    }

    /// Largest `|form(v, w)|` over frame vectors; zero exactly on isotropic relations.
    pub fn isotropy_defect(&self, kind: FormKind) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        let m = self.frame().adjoint() * gram_matrix(kind, self.n) * self.frame();
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Projection of `V` onto the first block.
    pub fn domain(&self, tol: &Tolerance) -> ComplexSubspace {
        ComplexSubspace::span(&self.top(), tol)
    }

    /// Projection of `V` onto the second block.
    pub fn range(&self, tol: &Tolerance) -> ComplexSubspace {
        ComplexSubspace::span(&self.bottom(), tol)
    }

    /// `{x : (0, x) ∈ V}`.
    pub fn kernel_of_inverse(&self, tol: &Tolerance) -> ComplexSubspace {
        let n = self.n;
        if self.dim() == 0 {
            return ComplexSubspace::trivial(n);
        }
        // (0, x) = F c requires top(F) c = 0.
        let coeffs = crate::linalg::kernel(&self.top(), tol);
        ComplexSubspace::span(&(self.bottom() * coeffs.frame()), tol)
    }

    /// `{x : (x, 0) ∈ V}`.
    pub fn kernel(&self, tol: &Tolerance) -> ComplexSubspace {
        self.inverse().kernel_of_inverse(tol)
    }

    /// `{(y, x) : (x, y) ∈ V}`.
    pub fn inverse(&self) -> Self {
        let n = self.n;
        let f = self.frame();
        let mut swapped = CMatrix::zeros(2 * n, f.ncols());
        swapped.rows_mut(0, n).copy_from(&f.rows(n, n));
        swapped.rows_mut(n, n).copy_from(&f.rows(0, n));
        Self {
            n,
            space: ComplexSubspace::from_frame_unchecked(swapped),
        }
    }

    pub fn is_graph(&self, tol: &Tolerance) -> bool {
        self.kernel_of_inverse(tol).is_trivial()
    }

    /// Applies a linear map of `C^{2n}` to every vector of `V`.
    pub fn map(&self, m: &CMatrix, tol: &Tolerance) -> Result<Self> {
        Self::from_subspace(self.n, self.space.image(m, tol)?)
    }

    /// Operator whose graph is `V`, on its natural domain.
    ///
    /// Requires `V` to be a graph. The operator maps `domain(V)` into the
    /// span of the second-block images.
    pub fn as_operator(&self, tol: &Tolerance) -> Result<OperatorWithDomain> {
        if !self.is_graph(tol) {
            return Err(Error::InvalidArgument(
                "relation is not the graph of an operator".into(),
            ));
        }
        let dom = self.domain(tol);
        let top = self.top();
        let bottom = self.bottom();
        // Graph frame columns are (T c, B c); T^† on D is invertible.
        let a = dom.frame().adjoint() * &top;
        let images = right_divide(&bottom, &a, tol)?;
        let target = ComplexSubspace::span(&images, tol);
        let matrix = target.frame().adjoint() * &images;
        Ok(OperatorWithDomain {
            domain: dom,
            closure: target,
            matrix,
        })
    }

    /// `V ∩ (D ⊕ D)` with `D = domain(V)`.
    pub fn integrability_extract(&self, tol: &Tolerance) -> Result<Self> {
        let d = self.domain(tol);
        let n = self.n;
        let k = d.dim();
        let mut dd = CMatrix::zeros(2 * n, 2 * k);
        dd.view_mut((0, 0), (n, k)).copy_from(d.frame());
        dd.view_mut((n, k), (n, k)).copy_from(d.frame());
        let block = Self::from_subspace(n, ComplexSubspace::from_frame_unchecked(dd))?;
        self.intersection(&block, tol)
    }

    /// Splits an (anti) self-adjoint relation into `{(x, A x + v) : x ∈ D, v ∈ D^⊥}`.
    ///
    /// `A` is Hermitian for `zeroMinus` and anti-Hermitian for `zeroPlus`.
    pub fn decompose_self_adjoint(
        &self,
        kind: FormKind,
        tol: &Tolerance,
    ) -> Result<OperatorWithDomain> {
        if !matches!(kind, FormKind::ZeroPlus | FormKind::ZeroMinus) {
            return Err(Error::InvalidArgument(format!(
                "self-adjoint decomposition is defined for zeroPlus and zeroMinus, not {kind}"
            )));
        }
        if !self.is_lagrangian(kind, tol) {
            return Err(Error::NotLagrangian(kind));
        }
        let d = self.domain(tol);
        let k = d.dim();
        if k == 0 {
            return Ok(OperatorWithDomain {
                domain: d.clone(),
                closure: d,
                matrix: CMatrix::zeros(0, 0),
            });
        }
        let v1 = self.integrability_extract(tol)?;
        if v1.dim() != k {
            return Err(Error::NotLagrangian(kind));
        }
        let a = d.frame().adjoint() * v1.top();
        let b = d.frame().adjoint() * v1.bottom();
        let mut m = right_divide(&b, &a, tol)?;
        // Symmetrize against roundoff; the defect was bounded by Lagrangianity.
        let half = c64(0.5, 0.0);
        m = match kind {
            FormKind::ZeroMinus => (&m + m.adjoint()) * half,
            _ => (&m - m.adjoint()) * half,
        };
        Ok(OperatorWithDomain {
            domain: d.clone(),
            closure: d,
            matrix: m,
        })
    }
}

/// An operator `A : D → D̄` held in frame coordinates.
///
/// `matrix[(i, j)]` is the `i`-th coefficient, against the closure frame, of
/// `A` applied to the `j`-th domain frame vector. At finite dimension the
/// closure of `D` is `D` itself; a wider target subspace is allowed so that
/// restrictions of ambient operators whose images leave `D` can be
/// represented.
#[derive(Clone, Debug)]
pub struct OperatorWithDomain {
    pub domain: ComplexSubspace,
    pub closure: ComplexSubspace,
    pub matrix: CMatrix,
}

impl OperatorWithDomain {
    pub fn new(
        domain: ComplexSubspace,
        closure: ComplexSubspace,
        matrix: CMatrix,
    ) -> Result<Self> {
        if domain.ambient_dim() != closure.ambient_dim() {
            return Err(Error::DimensionMismatch(
                "domain and closure live in different spaces".into(),
            ));
        }
        if matrix.nrows() != closure.dim() || matrix.ncols() != domain.dim() {
            return Err(Error::DimensionMismatch(format!(
                "operator matrix {}x{} for domain dim {} and closure dim {}",
                matrix.nrows(),
                matrix.ncols(),
                domain.dim(),
                closure.dim()
            )));
        }
        crate::linalg::ensure_finite(&matrix)?;
        Ok(Self {
            domain,
            closure,
            matrix,
        })
    }

    /// Full-domain operator given by an ambient square matrix.
    pub fn full(a: &CMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "operator from a {}x{} matrix",
                a.nrows(),
                a.ncols()
            )));
        }
        let n = a.nrows();
        Self::new(ComplexSubspace::full(n), ComplexSubspace::full(n), a.clone())
    }

    /// `A` restricted to `D`, which must be invariant.
    pub fn restrict(a: &CMatrix, domain: ComplexSubspace, tol: &Tolerance) -> Result<Self> {
        Self::restrict_into(a, domain.clone(), domain, tol)
    }

    /// `A` restricted to `D` with images in `target`.
    pub fn restrict_into(
        a: &CMatrix,
        domain: ComplexSubspace,
        target: ComplexSubspace,
        tol: &Tolerance,
    ) -> Result<Self> {
        let n = domain.ambient_dim();
        if a.nrows() != n || a.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "ambient operator {}x{} for subspaces of C^{n}",
                a.nrows(),
                a.ncols()
            )));
        }
        let images = a * domain.frame();
        let scale = a.norm().max(1.0);
        for c in images.column_iter() {
            let c = c.into_owned();
            let r = target.residual(&c);
            if r > tol.eq_tol * scale {
                return Err(Error::NotInDomain { residual: r });
            }
        }
        let matrix = target.frame().adjoint() * images;
        Self::new(domain, target, matrix)
    }

    pub fn n(&self) -> usize {
        self.domain.ambient_dim()
    }

    /// Ambient matrix acting as `A` on `D` and as zero on `D^⊥`.
    pub fn ambient_matrix(&self) -> CMatrix {
        self.closure.frame() * &self.matrix * self.domain.frame().adjoint()
    }

    /// Compression `F_D^† A F_D` to the domain frame.
    pub fn domain_matrix(&self) -> CMatrix {
        self.domain.frame().adjoint() * self.closure.frame() * &self.matrix
    }

    /// Matrix in closure coordinates when the closure coincides with the domain.
    pub fn closure_matrix(&self) -> CMatrix {
        &self.matrix * (self.domain.frame().adjoint() * self.closure.frame())
    }

    pub fn closure_is_domain(&self, tol: &Tolerance) -> bool {
        self.domain.approx_eq(&self.closure, tol)
    }

    pub fn apply(&self, x: &CVector, tol: &Tolerance) -> Result<CVector> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for operator on C^{}",
                x.len(),
                self.n()
            )));
        }
        let r = self.domain.residual(x);
        if r > tol.eq_tol * x.norm().max(1.0) {
            return Err(Error::NotInDomain { residual: r });
        }
        Ok(self.ambient_matrix() * x)
    }

    /// `‖F^† A F - (F^† A F)^†‖ / ‖A‖` on the domain frame.
    pub fn symmetry_defect(&self) -> f64 {
        hermitian_defect(&self.domain_matrix())
    }

    pub fn is_symmetric(&self, tol: &Tolerance) -> bool {
        self.symmetry_defect() <= tol.eq_tol
    }

    /// Graph `{(x, A x) : x ∈ D}`.
    pub fn graph(&self, tol: &Tolerance) -> LinearRelation {
        LinearRelation::graph_on(&self.domain, &self.ambient_matrix(), tol)
            .expect("frames share the ambient space")
    }

    /// `{(x, c A x + v) : x ∈ D, v ∈ D^⊥}`.
    pub fn scaled_relation(&self, c: crate::linalg::C64, tol: &Tolerance) -> LinearRelation {
        LinearRelation::with_orthogonal_kernel(&self.domain, &(self.ambient_matrix() * c), tol)
            .expect("frames share the ambient space")
    }

    /// Spectrum of a symmetric operator with `D̄ = D`.
    pub fn eigenvalues(&self, tol: &Tolerance) -> Result<Vec<f64>> {
        Ok(crate::linalg::spectral_decomp_hermitian(&self.closure_matrix(), tol)?.eigenvalues)
    }
}

/// Real `4n × 4n` matrix of multiplication by `i` in `(q, p, q̇, ṗ)` coordinates.
pub fn real_complex_structure(n: usize) -> RMatrix {
    let mut j = RMatrix::zeros(4 * n, 4 * n);
    for k in 0..n {
        // (q, p) -> (-p, q)
        j[(k, n + k)] = -1.0;
        j[(n + k, k)] = 1.0;
        // (q̇, ṗ) -> (-ṗ, q̇)
        j[(2 * n + k, 3 * n + k)] = -1.0;
        j[(3 * n + k, 2 * n + k)] = 1.0;
    }
    j
}

fn quarter(real_dim: usize) -> Result<usize> {
    if !real_dim.is_multiple_of(4) {
        return Err(Error::DimensionMismatch(format!(
            "real ambient dimension {real_dim} is not divisible by 4"
        )));
    }
    Ok(real_dim / 4)
}

/// Whether a real subspace of `R^{4n}` in `(q, p, q̇, ṗ)` order is a complex subspace
/// of `C^n ⊕ C^n` under `x = q + i p`, `ẋ = q̇ + i ṗ`.
pub fn is_complex_linear(s: &RealSubspace, tol: &Tolerance) -> Result<bool> {
    let n = quarter(s.ambient_dim())?;
    if !s.dim().is_multiple_of(2) {
        return Ok(false);
    }
    let p = s.projector();
    let j = real_complex_structure(n);
    Ok((&p * &j - &j * &p).norm() <= tol.eq_tol * (s.dim().max(1) as f64).sqrt())
}

/// Complex vector `(q + i p, q̇ + i ṗ)` of a real `(q, p, q̇, ṗ)` vector.
pub fn real_to_complex(v: &[f64], n: usize) -> CVector {
    CVector::from_fn(2 * n, |i, _| {
        if i < n {
            c64(v[i], v[n + i])
        } else {
            let k = i - n;
            c64(v[2 * n + k], v[3 * n + k])
        }
    })
}

/// Real `(q, p, q̇, ṗ)` coordinates of a complex vector of `C^n ⊕ C^n`.
pub fn complex_to_real(v: &CVector, n: usize) -> Vec<f64> {
    let mut r = vec![0.0; 4 * n];
    for k in 0..n {
        r[k] = v[k].re;
        r[n + k] = v[k].im;
        r[2 * n + k] = v[n + k].re;
        r[3 * n + k] = v[n + k].im;
    }
    r
}

/// Complex span of a real subspace read through `x = q + i p`, `ẋ = q̇ + i ṗ`.
///
/// For complex-linear input the complex dimension is half the real one;
/// otherwise the complex span is strictly larger than the real set.
pub fn complex_span(s: &RealSubspace, tol: &Tolerance) -> Result<LinearRelation> {
    let n = quarter(s.ambient_dim())?;
    let f = s.frame();
    let mut g = CMatrix::zeros(2 * n, f.ncols());
    for (j, col) in f.column_iter().enumerate() {
        let v: Vec<f64> = col.iter().copied().collect();
        g.set_column(j, &real_to_complex(&v, n));
    }
    LinearRelation::span(n, &g, tol)
}

/// Underlying real subspace of a complex relation, in `(q, p, q̇, ṗ)` order.
pub fn realify(v: &LinearRelation, tol: &Tolerance) -> RealSubspace {
    let n = v.n();
    let f = v.frame();
    let mut g: DMatrix<f64> = DMatrix::zeros(4 * n, 2 * f.ncols());
    for (j, col) in f.column_iter().enumerate() {
        let c = col.into_owned();
        let ic = &c * c64(0.0, 1.0);
        g.set_column(2 * j, &crate::linalg::RVector::from_vec(complex_to_real(&c, n)));
        g.set_column(2 * j + 1, &crate::linalg::RVector::from_vec(complex_to_real(&ic, n)));
    }
    RealSubspace::span(&g, tol)
}
