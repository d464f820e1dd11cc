//! Dense linear algebra primitives shared by every other module.
//!
//! Rank decisions are always made from singular values relative to the
//! largest one, never from pivoted elimination. Subspaces are carried as
//! orthonormal column frames and compared through their orthogonal
//! projectors, so no result depends on the particular frame chosen.
//!
//! The inner product is anti-linear in the first slot and linear in the
//! second: `<v, w> = v^† w`.

use std::fmt;

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;
pub type RMatrix = DMatrix<f64>;
pub type RVector = DVector<f64>;

/// Shorthand for a complex scalar.
#[inline]
pub const fn c64(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

/// Scalar field of a subspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

/// The two scalar types the toolkit works over: `f64` and `Complex64`.
pub trait Scalar: ComplexField<RealField = f64> + Copy + fmt::Debug {
    const FIELD: Field;

    fn to_complex(self) -> C64;

    /// Full SVD through faer, `None` if it does not converge.
    fn full_svd(m: &DMatrix<Self>) -> Option<Svd<Self>>;

    fn singular_values_of(m: &DMatrix<Self>) -> Option<Vec<f64>>;
}

macro_rules! faer_scalar {
    ($t:ty, $field:expr, $to_complex:expr, $re:expr) => {
        impl Scalar for $t {
            const FIELD: Field = $field;

            fn to_complex(self) -> C64 {
                $to_complex(self)
            }

            fn full_svd(m: &DMatrix<Self>) -> Option<Svd<Self>> {
                let a = faer::Mat::<$t>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
                let svd = a.svd().ok()?;
                let (u, v) = (svd.U(), svd.V());
                let s = svd.S().column_vector();
                Some(Svd {
                    u: DMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)]),
                    singular_values: (0..s.nrows()).map(|i| $re(s[i])).collect(),
                    v: DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)]),
                })
            }

            fn singular_values_of(m: &DMatrix<Self>) -> Option<Vec<f64>> {
                let a = faer::Mat::<$t>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
                a.singular_values().ok()
            }
        }
    };
}

faer_scalar!(f64, Field::Real, |x: f64| c64(x, 0.0), |x: f64| x);
faer_scalar!(C64, Field::Complex, |z: C64| z, |z: C64| z.re);

/// Full singular value decomposition `M = U Σ V^†` with singular values descending.
#[derive(Clone, Debug)]
pub struct Svd<T: Scalar> {
    /// `rows × rows` unitary.
    pub u: DMatrix<T>,
    /// Length `min(rows, cols)`.
    pub singular_values: Vec<f64>,
    /// `cols × cols` unitary.
    pub v: DMatrix<T>,
}

pub fn svd<T: Scalar>(m: &DMatrix<T>) -> Result<Svd<T>> {
    ensure_finite(m)?;
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Svd {
            u: DMatrix::identity(m.nrows(), m.nrows()),
            singular_values: vec![],
            v: DMatrix::identity(m.ncols(), m.ncols()),
        });
    }
    T::full_svd(m).ok_or(Error::NoConvergence)
}

/// Numerical tolerances used for rank decisions, comparisons and eigenvalue
/// clustering.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Tolerance {
    /// Singular values below `rank_tol * sigma_max` count as zero.
    pub rank_tol: f64,
    /// Entrywise and residual comparisons.
    pub eq_tol: f64,
    /// Eigenvalues closer than this belong to the same cluster.
    pub eig_cluster_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rank_tol: 1e-10,
            eq_tol: 1e-9,
            eig_cluster_tol: 1e-8,
        }
    }
}

impl Tolerance {
    pub fn new(rank_tol: f64, eq_tol: f64, eig_cluster_tol: f64) -> Result<Self> {
        let tol = Self {
            rank_tol,
            eq_tol,
            eig_cluster_tol,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rankTol", self.rank_tol),
            ("eqTol", self.eq_tol),
            ("eigClusterTol", self.eig_cluster_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "tolerance {name} must be strictly positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Converts a real matrix into a complex one with zero imaginary parts.
pub fn complexify_matrix(m: &RMatrix) -> CMatrix {
    m.map(|x| c64(x, 0.0))
}

/// Relative Hermiticity defect `||M - M^†|| / ||M||` (zero for the zero matrix).
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let scale = m.norm();
    if scale == 0.0 {
        return 0.0;
    }
    (m - m.adjoint()).norm() / scale
}

/// `||M^† M - I||` for square `M`.
pub fn unitarity_defect(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    (m.adjoint() * m - CMatrix::identity(m.nrows(), m.ncols())).norm()
}

pub fn ensure_finite<T: Scalar>(m: &DMatrix<T>) -> Result<()> {
    if m.iter().all(|x| {
        let z = x.to_complex();
        z.re.is_finite() && z.im.is_finite()
    }) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// A linear subspace of `R^m` or `C^m`, held as an orthonormal column frame.
///
/// A frame with zero columns is the trivial subspace.
#[derive(Clone, Debug)]
pub struct Subspace<T: Scalar> {
    frame: DMatrix<T>,
}

pub type RealSubspace = Subspace<f64>;
pub type ComplexSubspace = Subspace<C64>;

impl<T: Scalar> Subspace<T> {
    pub fn trivial(ambient_dim: usize) -> Self {
        Self {
            frame: DMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            frame: DMatrix::identity(ambient_dim, ambient_dim),
        }
    }

    /// Span of the listed canonical basis vectors.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Result<Self> {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&bad) = sorted.iter().find(|&&i| i >= ambient_dim) {
            return Err(Error::DimensionMismatch(format!(
                "coordinate index {bad} outside ambient dimension {ambient_dim}"
            )));
        }
        let mut frame = DMatrix::zeros(ambient_dim, sorted.len());
        for (col, &i) in sorted.iter().enumerate() {
            frame[(i, col)] = T::one();
        }
        Ok(Self { frame })
    }

    /// Span of the columns of `generators`.
    pub fn span(generators: &DMatrix<T>, tol: &Tolerance) -> Self {
        Self {
            frame: range_frame(generators, tol),
        }
    }

    /// Wraps a frame that is already orthonormal, checking `F^† F = I`.
    pub fn from_orthonormal(frame: DMatrix<T>, tol: &Tolerance) -> Result<Self> {
        ensure_finite(&frame)?;
        let k = frame.ncols();
        if k > frame.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "frame has {k} columns in ambient dimension {}",
                frame.nrows()
            )));
        }
        let defect = (frame.adjoint() * &frame - DMatrix::<T>::identity(k, k)).norm();
        if defect > tol.eq_tol * (k.max(1) as f64) {
            return Err(Error::InvalidArgument(format!(
                "frame columns are not orthonormal (defect {defect:.3e})"
            )));
        }
        Ok(Self { frame })
    }

    pub(crate) fn from_frame_unchecked(frame: DMatrix<T>) -> Self {
        Self { frame }
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame.nrows()
    }

    pub fn dim(&self) -> usize {
        self.frame.ncols()
    }

    pub fn frame(&self) -> &DMatrix<T> {
        &self.frame
    }

    pub fn into_frame(self) -> DMatrix<T> {
        self.frame
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    pub fn projector(&self) -> DMatrix<T> {
        &self.frame * self.frame.adjoint()
    }

    pub fn project(&self, v: &DVector<T>) -> DVector<T> {
        &self.frame * (self.frame.adjoint() * v)
    }

    /// Norm of the component of `v` orthogonal to the subspace.
    pub fn residual(&self, v: &DVector<T>) -> f64 {
        (v - self.project(v)).norm()
    }

    /// `v` lies in the subspace up to `eq_tol` relative to its norm.
    pub fn contains_vector(&self, v: &DVector<T>, tol: &Tolerance) -> bool {
        self.residual(v) <= tol.eq_tol * v.norm().max(f64::MIN_POSITIVE)
            || v.norm() == 0.0
    }

    /// Projector containment `other ⊆ self`.
    pub fn contains(&self, other: &Self, tol: &Tolerance) -> bool {
        if other.ambient_dim() != self.ambient_dim() {
            return false;
        }
        if other.is_trivial() {
            return true;
        }
        let outside = other.frame() - &self.frame * (self.frame.adjoint() * other.frame());
        outside
            .column_iter()
            .all(|c| c.norm() <= tol.eq_tol)
    }

    /// Frobenius distance between the orthogonal projectors.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.ambient_dim() != other.ambient_dim() {
            return f64::INFINITY;
        }
        (self.projector() - other.projector()).norm()
    }

    /// Equality of orthogonal projectors within `eq_tol`.
    pub fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool {
        self.ambient_dim() == other.ambient_dim()
            && self.dim() == other.dim()
            && self.distance(other) <= tol.eq_tol * (self.dim().max(1) as f64).sqrt()
    }

    pub fn complement(&self, tol: &Tolerance) -> Self {
        if self.is_trivial() {
            return Self::full(self.ambient_dim());
        }
        kernel(&self.frame.adjoint(), tol)
    }

    /// Intersection computed as the kernel of the stacked complement frames.
    pub fn intersection(&self, other: &Self, tol: &Tolerance) -> Result<Self> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "intersection of subspaces of dimension {} and {}",
                self.ambient_dim(),
                other.ambient_dim()
            )));
        }
        let a = self.complement(tol);
        let b = other.complement(tol);
        let m = self.ambient_dim();
        if a.dim() + b.dim() == 0 {
            return Ok(Self::full(m));
        }
        let mut stacked = DMatrix::<T>::zeros(a.dim() + b.dim(), m);
        stacked
            .rows_mut(0, a.dim())
            .copy_from(&a.frame().adjoint());
        stacked
            .rows_mut(a.dim(), b.dim())
            .copy_from(&b.frame().adjoint());
        Ok(kernel(&stacked, tol))
    }

    pub fn sum(&self, other: &Self, tol: &Tolerance) -> Result<Self> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch(
                "sum of subspaces with different ambient dimensions".into(),
            ));
        }
        let mut gens = DMatrix::<T>::zeros(self.ambient_dim(), self.dim() + other.dim());
        gens.columns_mut(0, self.dim()).copy_from(self.frame());
        gens.columns_mut(self.dim(), other.dim())
            .copy_from(other.frame());
        Ok(Self::span(&gens, tol))
    }

    /// Image of the subspace under a linear map.
    pub fn image(&self, map: &DMatrix<T>, tol: &Tolerance) -> Result<Self> {
        if map.ncols() != self.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "map with {} columns applied to subspace of C^{}",
                map.ncols(),
                self.ambient_dim()
            )));
        }
        Ok(Self::span(&(map * &self.frame), tol))
    }
}

impl RealSubspace {
    pub fn to_complex_frame(&self) -> CMatrix {
        complexify_matrix(&self.frame)
    }
}

/// Orthonormal frame for the span of `vectors`, all of length `ambient_dim`.
pub fn orthonormalize<T: Scalar>(
    vectors: &[DVector<T>],
    ambient_dim: usize,
    tol: &Tolerance,
) -> Result<Subspace<T>> {
    if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim) {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} in ambient dimension {ambient_dim}",
            v.len()
        )));
    }
    if vectors.is_empty() {
        return Ok(Subspace::trivial(ambient_dim));
    }
    let gens = DMatrix::from_columns(vectors);
    ensure_finite(&gens)?;
    Ok(Subspace::span(&gens, tol))
}

/// Left singular vectors whose singular value clears the relative rank cutoff.
fn range_frame<T: Scalar>(m: &DMatrix<T>, tol: &Tolerance) -> DMatrix<T> {
    let rows = m.nrows();
    let Ok(svd) = svd(m) else {
        return DMatrix::zeros(rows, 0);
    };
    let sigma = &svd.singular_values;
    let smax = sigma.first().copied().unwrap_or(0.0);
    if smax <= 0.0 {
        return DMatrix::zeros(rows, 0);
    }
    let rank = sigma.iter().filter(|&&s| s >= tol.rank_tol * smax).count();
    svd.u.columns(0, rank).into_owned()
}

/// Null space of `m` (a subspace of the column space dimension).
pub fn kernel<T: Scalar>(m: &DMatrix<T>, tol: &Tolerance) -> Subspace<T> {
    let cols = m.ncols();
    let Ok(svd) = svd(m) else {
        return Subspace::trivial(cols);
    };
    let sigma = &svd.singular_values;
    let smax = sigma.first().copied().unwrap_or(0.0);
    let rank = if smax > 0.0 {
        sigma.iter().filter(|&&s| s >= tol.rank_tol * smax).count()
    } else {
        0
    };
    Subspace::from_frame_unchecked(svd.v.columns(rank, cols - rank).into_owned())
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix whose columns are the eigenvectors, in eigenvalue order.
    pub eigenvectors: CMatrix,
}

impl HermitianEigen {
    /// `V diag(f(λ)) V^†`.
    pub fn apply_function(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let n = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for j in 0..n {
            let fj = f(self.eigenvalues[j]);
            scaled.column_mut(j).iter_mut().for_each(|x| *x *= fj);
        }
        scaled * self.eigenvectors.adjoint()
    }
}

pub fn spectral_decomp_hermitian(m: &CMatrix, tol: &Tolerance) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "spectral decomposition of a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    ensure_finite(m)?;
    let defect = hermitian_defect(m);
    if defect > tol.eq_tol {
        return Err(Error::NotHermitian { defect });
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(HermitianEigen {
            eigenvalues: vec![],
            eigenvectors: CMatrix::zeros(0, 0),
        });
    }
    let sym = (m + m.adjoint()) * c64(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (c, &i) in order.iter().enumerate() {
        eigenvectors.set_column(c, &eig.eigenvectors.column(i));
    }
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Real symmetric counterpart of [`spectral_decomp_hermitian`].
pub fn spectral_decomp_symmetric(m: &RMatrix, tol: &Tolerance) -> Result<(Vec<f64>, RMatrix)> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "spectral decomposition of a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    ensure_finite(m)?;
    let scale = m.norm();
    let defect = if scale == 0.0 { 0.0 } else { (m - m.transpose()).norm() / scale };
    if defect > tol.eq_tol {
        return Err(Error::NotSymmetric { defect });
    }
    let n = m.nrows();
    if n == 0 {
        return Ok((vec![], RMatrix::zeros(0, 0)));
    }
    let e = ((m + m.transpose()) * 0.5).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let mut vecs = RMatrix::zeros(n, n);
    for (c, &i) in order.iter().enumerate() {
        vecs.set_column(c, &e.eigenvectors.column(i));
    }
    Ok((order.iter().map(|&i| e.eigenvalues[i]).collect(), vecs))
}

/// Polar factors `M = U P` with `U` unitary and `P = sqrt(M^† M)`.
#[derive(Clone, Debug)]
pub struct Polar {
    pub unitary: CMatrix,
    pub positive: CMatrix,
}

pub fn polar_decomposition(m: &CMatrix, tol: &Tolerance) -> Result<Polar> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "polar decomposition of a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    ensure_finite(m)?;
    let n = m.nrows();
    if n == 0 {
        return Ok(Polar {
            unitary: CMatrix::zeros(0, 0),
            positive: CMatrix::zeros(0, 0),
        });
    }
    let svd = svd(m)?;
    let sigma = &svd.singular_values;
    let largest = sigma[0];
    let smallest = sigma[n - 1];
    if largest <= 0.0 || smallest < tol.rank_tol * largest {
        return Err(Error::Singular { smallest, largest });
    }
    let unitary = &svd.u * svd.v.adjoint();
    let mut scaled = svd.v.clone();
    for j in 0..n {
        let s = c64(sigma[j], 0.0);
        scaled.column_mut(j).iter_mut().for_each(|x| *x *= s);
    }
    let positive = scaled * svd.v.adjoint();
    Ok(Polar { unitary, positive })
}

/// Singular values of any real or complex matrix, descending.
pub fn singular_values<T: Scalar>(m: &DMatrix<T>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return vec![];
    }
    let mut s = T::singular_values_of(m).unwrap_or_else(|| {
        m.clone().singular_values().iter().copied().collect()
    });
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Schatten p-norm `(Σ σ_i^p)^(1/p)`; `p = f64::INFINITY` is the operator norm.
pub fn schatten_norm<T: Scalar>(m: &DMatrix<T>, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    let sigma = singular_values(m);
    let smax = sigma.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Ok(0.0);
    }
    if p.is_infinite() {
        return Ok(smax);
    }
    let sum: f64 = sigma.iter().map(|s| (s / smax).powf(p)).sum();
    Ok(smax * sum.powf(1.0 / p))
}

/// Operator norm (largest singular value).
pub fn operator_norm<T: Scalar>(m: &DMatrix<T>) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Trace norm (sum of singular values).
pub fn trace_norm<T: Scalar>(m: &DMatrix<T>) -> f64 {
    singular_values(m).iter().sum()
}

/// Solves `X a = b` for square invertible `a`.
pub(crate) fn right_divide(b: &CMatrix, a: &CMatrix, tol: &Tolerance) -> Result<CMatrix> {
    if a.nrows() == 0 {
        return Ok(CMatrix::zeros(b.nrows(), 0));
    }
    let sigma = singular_values(a);
    let largest = sigma[0];
    let smallest = *sigma.last().unwrap();
    if largest <= 0.0 || smallest < tol.rank_tol * largest {
        return Err(Error::Singular { smallest, largest });
    }
    // X a = b  <=>  a^† X^† = b^†
    let lu = a.adjoint().lu();
    let xh = lu
        .solve(&b.adjoint())
        .ok_or(Error::Singular { smallest, largest })?;
    Ok(xh.adjoint())
}

/// Re-expresses a frame deterministically: columns ordered by descending
/// overlap with canonical basis vectors (lowest index on ties), each column
/// phase-fixed so its pivot entry is real positive.
pub fn canonical_frame(space: &ComplexSubspace) -> ComplexSubspace {
    let m = space.ambient_dim();
    let k = space.dim();
    let f = space.frame();
    let mut cols: Vec<CVector> = Vec::with_capacity(k);
    let mut used = vec![false; m];
    for _ in 0..k {
        // Residual projector onto the part of the space not yet covered.
        let mut best: Option<(usize, f64, CVector)> = None;
        for i in 0..m {
            if used[i] {
                continue;
            }
            let mut v = f * f.row(i).adjoint();
            for c in &cols {
                let ov = c.dotc(&v);
                v -= c * ov;
            }
            let w = v.norm();
            if best.as_ref().is_none_or(|b| w > b.1 + 1e-12) {
                best = Some((i, w, v));
            }
        }
        let (i, w, v) = best.expect("space has remaining directions");
        used[i] = true;
        let mut v = v / c64(w, 0.0);
        let pivot = v[i];
        if pivot.norm() > 0.0 {
            let phase = pivot.conj() / c64(pivot.norm(), 0.0);
            v *= phase;
        }
        cols.push(v);
    }
    if cols.is_empty() {
        return ComplexSubspace::trivial(m);
    }
    ComplexSubspace::from_frame_unchecked(CMatrix::from_columns(&cols))
}
