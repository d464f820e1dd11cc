//! Cayley transform, deficiency spaces and self-adjoint extensions.
//!
//! The Cayley map `C(x, x') = (x' + i x, x' − i x) / √2` sends a symmetric
//! relation to the graph of a partial isometry `U : W₊ → W₋`. Self-adjoint
//! extensions correspond to unitaries `U₀ : N₊ → N₋` between the orthogonal
//! complements `N± = W±^⊥`.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c64, canonical_frame, right_divide, unitarity_defect, CMatrix, CVector, ComplexSubspace,
    Tolerance, C64,
};
use crate::relations::{FormKind, LinearRelation, OperatorWithDomain};

/// Matrix of the Cayley map on `C^n ⊕ C^n`.
pub fn cayley_matrix(n: usize) -> CMatrix {
    let s = FRAC_1_SQRT_2;
    let mut c = CMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        c[(k, k)] = c64(0.0, s);
        c[(k, n + k)] = c64(s, 0.0);
        c[(n + k, k)] = c64(0.0, -s);
        c[(n + k, n + k)] = c64(s, 0.0);
    }
    c
}

/// `C(x, x') = (x' + i x, x' − i x) / √2`.
pub fn cayley_vector(v: &CVector) -> Result<CVector> {
    let n = half(v.len())?;
    let (x, xp) = (v.rows(0, n), v.rows(n, n));
    let i = c64(0.0, 1.0);
    let s = c64(FRAC_1_SQRT_2, 0.0);
    let mut out = CVector::zeros(2 * n);
    out.rows_mut(0, n).copy_from(&((xp + x * i) * s));
    out.rows_mut(n, n).copy_from(&((xp - x * i) * s));
    Ok(out)
}

/// `C^{-1}(y, y') = (i (y' − y), y + y') / √2`.
pub fn inverse_cayley_vector(v: &CVector) -> Result<CVector> {
    let n = half(v.len())?;
    let (y, yp) = (v.rows(0, n), v.rows(n, n));
    let i = c64(0.0, 1.0);
    let s = c64(FRAC_1_SQRT_2, 0.0);
    let mut out = CVector::zeros(2 * n);
    out.rows_mut(0, n).copy_from(&((yp - y) * (i * s)));
    out.rows_mut(n, n).copy_from(&((y + yp) * s));
    Ok(out)
}

fn half(len: usize) -> Result<usize> {
    if !len.is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!(
            "vector of odd length {len} in a doubled space"
        )));
    }
    Ok(len / 2)
}

pub fn cayley_relation(v: &LinearRelation, tol: &Tolerance) -> LinearRelation {
    v.map(&cayley_matrix(v.n()), tol).expect("square map of matching size")
}

pub fn inverse_cayley_relation(v: &LinearRelation, tol: &Tolerance) -> LinearRelation {
    v.map(&cayley_matrix(v.n()).adjoint(), tol)
        .expect("square map of matching size")
}

/// Scalar Cayley image `(λ − i)/(λ + i)` of a real eigenvalue.
pub fn cayley_scalar(lambda: f64) -> C64 {
    let i = c64(0.0, 1.0);
    (c64(lambda, 0.0) - i) / (c64(lambda, 0.0) + i)
}

/// Inverse scalar Cayley map `i(1 + u)/(1 − u)`; infinite at `u = 1`.
pub fn inverse_cayley_scalar(u: C64) -> C64 {
    c64(0.0, 1.0) * (c64(1.0, 0.0) + u) / (c64(1.0, 0.0) - u)
}

/// Partial isometry of a symmetric relation and its deficiency spaces.
///
/// `matrix` maps coordinates against the `w_plus` frame to coordinates
/// against the `w_minus` frame. All frames are canonical.
#[derive(Clone, Debug)]
pub struct CayleyData {
    pub w_plus: ComplexSubspace,
    pub w_minus: ComplexSubspace,
    pub matrix: CMatrix,
    pub n_plus: ComplexSubspace,
    pub n_minus: ComplexSubspace,
}

impl CayleyData {
    pub fn n(&self) -> usize {
        self.w_plus.ambient_dim()
    }

    /// Deficiency indices `(dim N₊, dim N₋)`.
    pub fn indices(&self) -> (usize, usize) {
        (self.n_plus.dim(), self.n_minus.dim())
    }

    pub fn isometry_defect(&self) -> f64 {
        let k = self.matrix.ncols();
        (self.matrix.adjoint() * &self.matrix - CMatrix::identity(k, k)).norm()
    }

    /// `U` as an `n × n` matrix vanishing on `N₊`.
    pub fn ambient_partial_isometry(&self) -> CMatrix {
        self.w_minus.frame() * &self.matrix * self.w_plus.frame().adjoint()
    }

    /// `U ⊕ U₀` for `U₀` given against the `N₊` and `N₋` frames.
    pub fn unitary_extension(&self, u0: &CMatrix, tol: &Tolerance) -> Result<CMatrix> {
        let (dp, dm) = self.indices();
        if dp != dm {
            return Err(Error::InvalidArgument(format!(
                "unequal deficiency indices ({dp}, {dm}) admit no self-adjoint extension"
            )));
        }
        if u0.nrows() != dm || u0.ncols() != dp {
            return Err(Error::DimensionMismatch(format!(
                "U0 is {}x{} but the deficiency indices are ({dp}, {dm})",
                u0.nrows(),
                u0.ncols()
            )));
        }
        crate::linalg::ensure_finite(u0)?;
        let defect = unitarity_defect(u0);
        if dp > 0 && defect > tol.eq_tol * (dp as f64).sqrt().max(1.0) {
            return Err(Error::NotUnitary { defect });
        }
        Ok(self.ambient_partial_isometry()
            + self.n_minus.frame() * u0 * self.n_plus.frame().adjoint())
    }

    /// `‖U (A + i) F − (A − i) F‖` on the domain frame of a symmetric operator.
    pub fn cayley_identity_residual(&self, a: &OperatorWithDomain) -> f64 {
        let f = a.domain.frame();
        let af = a.ambient_matrix() * f;
        let i = c64(0.0, 1.0);
        let plus = &af + f * i;
        let minus = &af - f * i;
        (self.ambient_partial_isometry() * plus - minus).norm()
    }
}

/// Cayley data of an `ω₀₋`-isotropic (symmetric) relation.
pub fn partial_isometry_of(v: &LinearRelation, tol: &Tolerance) -> Result<CayleyData> {
    if !v.is_isotropic(FormKind::ZeroMinus, tol) {
        return Err(Error::NotIsotropic(FormKind::ZeroMinus));
    }
    let n = v.n();
    let cv = cayley_relation(v, tol);
    if !cv.is_isotropic(FormKind::Minus, tol) {
        return Err(Error::NotIsotropic(FormKind::Minus));
    }
    let top = cv.top();
    let bottom = cv.bottom();
    let w_plus = canonical_frame(&ComplexSubspace::span(&top, tol));
    let w_minus = canonical_frame(&ComplexSubspace::span(&bottom, tol));
    if w_plus.dim() != cv.dim() || w_minus.dim() != cv.dim() {
        return Err(Error::NotIsotropic(FormKind::Minus));
    }
    let matrix = if cv.dim() == 0 {
        CMatrix::zeros(0, 0)
    } else {
        let a = w_plus.frame().adjoint() * &top;
        let b = w_minus.frame().adjoint() * &bottom;
        right_divide(&b, &a, tol)?
    };
    let n_plus = canonical_frame(&w_plus.complement(tol));
    let n_minus = canonical_frame(&w_minus.complement(tol));
    debug_assert_eq!(n_plus.ambient_dim(), n);
    Ok(CayleyData {
        w_plus,
        w_minus,
        matrix,
        n_plus,
        n_minus,
    })
}

/// Self-adjoint extension of a symmetric relation through `U ⊕ U₀`.
pub fn extend(v: &LinearRelation, u0: &CMatrix, tol: &Tolerance) -> Result<LinearRelation> {
    let data = partial_isometry_of(v, tol)?;
    extend_with(&data, u0, tol)
}

pub fn extend_with(data: &CayleyData, u0: &CMatrix, tol: &Tolerance) -> Result<LinearRelation> {
    let u = data.unitary_extension(u0, tol)?;
    let graph = LinearRelation::graph(&u, tol)?;
    Ok(inverse_cayley_relation(&graph, tol))
}

/// Summary of one self-adjoint extension.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtensionSummary {
    pub is_graph: bool,
    /// Spectrum of the operator part on its domain, ascending.
    pub eigenvalues: Vec<f64>,
    pub domain_dim: usize,
    pub lagrangian_defect: f64,
}

pub fn summarize_extension(v: &LinearRelation, tol: &Tolerance) -> Result<ExtensionSummary> {
    let op = v.decompose_self_adjoint(FormKind::ZeroMinus, tol)?;
    let lagrangian_defect = v
        .ortho_complement(FormKind::ZeroMinus, tol)
        .distance(v);
    Ok(ExtensionSummary {
        is_graph: v.is_graph(tol),
        eigenvalues: op.eigenvalues(tol)?,
        domain_dim: op.domain.dim(),
        lagrangian_defect,
    })
}

/// Deficiency spaces of a symmetric operator computed in two independent ways.
#[derive(Clone, Debug)]
pub struct DeficiencyReport {
    /// Cayley data; `n_plus`/`n_minus` come from the range complements.
    pub data: CayleyData,
    /// `ker(A^† − i)` from the adjoint relation.
    pub n_plus_adjoint: ComplexSubspace,
    /// `ker(A^† + i)` from the adjoint relation.
    pub n_minus_adjoint: ComplexSubspace,
}

impl DeficiencyReport {
    /// Largest projector distance between the two computations.
    pub fn discrepancy(&self) -> f64 {
        let dp = if self.data.n_plus.dim() == self.n_plus_adjoint.dim() {
            self.data.n_plus.distance(&self.n_plus_adjoint)
        } else {
            f64::INFINITY
        };
        let dm = if self.data.n_minus.dim() == self.n_minus_adjoint.dim() {
            self.data.n_minus.distance(&self.n_minus_adjoint)
        } else {
            f64::INFINITY
        };
        dp.max(dm)
    }

    pub fn agrees(&self, tol: &Tolerance) -> bool {
        self.discrepancy() <= tol.eq_tol
    }
}

/// `N± = range(A ± i)^⊥` compared against `N± = ker(A^† ∓ i)`.
pub fn deficiency_of_operator(a: &OperatorWithDomain, tol: &Tolerance) -> Result<DeficiencyReport> {
    let defect = a.symmetry_defect();
    if defect > tol.eq_tol {
        return Err(Error::NotHermitian { defect });
    }
    let n = a.n();
    let f = a.domain.frame();
    let af = a.ambient_matrix() * f;
    let i = c64(0.0, 1.0);
    let range_plus = ComplexSubspace::span(&(&af + f * i), tol);
    let range_minus = ComplexSubspace::span(&(&af - f * i), tol);

    let graph = a.graph(tol);
    let mut data = partial_isometry_of(&graph, tol)?;
    data.n_plus = canonical_frame(&range_plus.complement(tol));
    data.n_minus = canonical_frame(&range_minus.complement(tol));

    let adjoint = graph.ortho_complement(FormKind::ZeroMinus, tol);
    let eigen = |s: C64| -> Result<ComplexSubspace> {
        let target =
            LinearRelation::graph(&(CMatrix::identity(n, n) * s), tol)?;
        let meet = adjoint.intersection(&target, tol)?;
        Ok(canonical_frame(&meet.domain(tol)))
    };
    Ok(DeficiencyReport {
        data,
        n_plus_adjoint: eigen(i)?,
        n_minus_adjoint: eigen(-i)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::{form_value, stack};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn e(n: usize, k: usize) -> CVector {
        let mut v = CVector::zeros(n);
        v[k] = c64(1.0, 0.0);
        v
    }

    fn cdiag(d: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_iterator(d.len(), d.iter().map(|&x| c64(x, 0.0))))
    }

    fn model() -> LinearRelation {
        LinearRelation::from_pairs(2, &[(e(2, 0), e(2, 0) * c64(2.0, 0.0))], &tol()).unwrap()
    }

    #[test]
    fn cayley_of_first_basis_vector() {
        let v = stack(&e(1, 0), &CVector::zeros(1));
        let c = cayley_vector(&v).unwrap();
        let s = FRAC_1_SQRT_2;
        assert_relative_eq!((c[0] - c64(0.0, s)).norm(), 0.0, epsilon = 1e-15);
        assert_relative_eq!((c[1] - c64(0.0, -s)).norm(), 0.0, epsilon = 1e-15);
        assert!((cayley_matrix(1) * &v - c).norm() < 1e-15);
        assert!(unitarity_defect(&cayley_matrix(3)) < 1e-14);
    }

    #[test]
    fn inverse_cayley_round_trip() {
        let v = CVector::from_vec(vec![c64(1.0, 2.0), c64(-0.5, 0.0), c64(0.0, 3.0), c64(1.0, 1.0)]);
        let back = inverse_cayley_vector(&cayley_vector(&v).unwrap()).unwrap();
        assert!((back - v).norm() < 1e-14);
    }

    #[test]
    fn gram_matrices_transform_into_each_other() {
        // The Cayley map pulls zeroPlus back to minus and minus back to -zeroMinus.
        use crate::relations::gram_matrix;
        let n = 3;
        let c = cayley_matrix(n);
        let zp = c.adjoint() * gram_matrix(FormKind::ZeroPlus, n) * &c;
        assert!((zp - gram_matrix(FormKind::Minus, n)).norm() < 1e-14);
        let m = c.adjoint() * gram_matrix(FormKind::Minus, n) * &c;
        assert!((m + gram_matrix(FormKind::ZeroMinus, n)).norm() < 1e-14);
    }

    #[test]
    fn form_transfer_on_sample_vectors() {
        let v = CVector::from_vec(vec![c64(0.3, -1.0), c64(2.0, 0.5), c64(-1.0, 0.0), c64(0.0, 0.7)]);
        let w = CVector::from_vec(vec![c64(1.0, 1.0), c64(0.0, -2.0), c64(0.4, 0.1), c64(-0.3, 2.0)]);
        let (cv, cw) = (cayley_vector(&v).unwrap(), cayley_vector(&w).unwrap());
        let a = form_value(FormKind::ZeroPlus, &cv, &cw).unwrap();
        let b = form_value(FormKind::Minus, &v, &w).unwrap();
        assert!((a - b).norm() < 1e-14);
        let a = form_value(FormKind::Minus, &cv, &cw).unwrap();
        let b = form_value(FormKind::ZeroMinus, &v, &w).unwrap();
        assert!((a + b).norm() < 1e-14);
    }

    #[test]
    fn cayley_of_hermitian_scalar() {
        let v = LinearRelation::graph(&cdiag(&[2.0]), &tol()).unwrap();
        let u = cayley_scalar(2.0);
        assert!((u - c64(0.6, -0.8)).norm() < 1e-15);
        let expected = LinearRelation::graph(&CMatrix::from_element(1, 1, u), &tol()).unwrap();
        assert!(cayley_relation(&v, &tol()).approx_eq(&expected, &tol()));
        assert!((inverse_cayley_scalar(u) - c64(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn self_adjoint_graph_gives_unitary() {
        let v = LinearRelation::graph(&cdiag(&[1.0, 3.0]), &tol()).unwrap();
        let d = partial_isometry_of(&v, &tol()).unwrap();
        assert_eq!(d.indices(), (0, 0));
        let u = d.ambient_partial_isometry();
        assert!(unitarity_defect(&u) < 1e-12);
        assert!((u[(0, 0)] - c64(0.0, -1.0)).norm() < 1e-12);
        assert!((u[(1, 1)] - c64(0.8, -0.6)).norm() < 1e-12);
        let a = OperatorWithDomain::full(&cdiag(&[1.0, 3.0])).unwrap();
        assert!(d.cayley_identity_residual(&a) < 1e-12);
    }

    #[test]
    fn model_relation_has_indices_one_one() {
        let d = partial_isometry_of(&model(), &tol()).unwrap();
        let e1 = ComplexSubspace::coordinate(2, &[0]).unwrap();
        let e2 = ComplexSubspace::coordinate(2, &[1]).unwrap();
        assert!(d.w_plus.approx_eq(&e1, &tol()) && d.w_minus.approx_eq(&e1, &tol()));
        assert!(d.n_plus.approx_eq(&e2, &tol()) && d.n_minus.approx_eq(&e2, &tol()));
        assert_eq!(d.indices(), (1, 1));
        let u = d.ambient_partial_isometry();
        assert!((u[(0, 0)] - c64(0.6, -0.8)).norm() < 1e-12);
        assert!(d.isometry_defect() < 1e-12);
    }

    #[test]
    fn trivial_relation_has_full_indices() {
        let d = partial_isometry_of(&LinearRelation::trivial(3), &tol()).unwrap();
        assert_eq!(d.indices(), (3, 3));
        assert_eq!(d.matrix.shape(), (0, 0));
    }

    #[test]
    fn non_symmetric_relation_is_rejected() {
        let v = LinearRelation::from_pairs(1, &[(e(1, 0), e(1, 0) * c64(0.0, 1.0))], &tol()).unwrap();
        assert!(matches!(
            partial_isometry_of(&v, &tol()),
            Err(Error::NotIsotropic(FormKind::ZeroMinus))
        ));
    }

    fn second_eigenvalue(theta: f64) -> f64 {
        let u0 = CMatrix::from_element(1, 1, C64::from_polar(1.0, theta));
        let ext = extend(&model(), &u0, &tol()).unwrap();
        assert!(ext.is_lagrangian(FormKind::ZeroMinus, &tol()));
        assert!(ext.contains(&model(), &tol()));
        let op = ext.decompose_self_adjoint(FormKind::ZeroMinus, &tol()).unwrap();
        op.ambient_matrix()[(1, 1)].re
    }

    #[test]
    fn extension_at_theta_pi() {
        let u0 = CMatrix::from_element(1, 1, c64(-1.0, 0.0));
        let ext = extend(&model(), &u0, &tol()).unwrap();
        let expected = LinearRelation::graph(&cdiag(&[2.0, 0.0]), &tol()).unwrap();
        assert!(ext.approx_eq(&expected, &tol()));
    }

    #[test]
    fn extension_eigenvalue_sweep() {
        for (theta, lam) in [(PI / 2.0, -1.0), (PI, 0.0), (1.5 * PI, 1.0)] {
            assert_relative_eq!(second_eigenvalue(theta), lam, epsilon = 1e-9);
        }
    }

    #[test]
    fn extension_at_theta_zero_is_not_a_graph() {
        let u0 = CMatrix::from_element(1, 1, c64(1.0, 0.0));
        let ext = extend(&model(), &u0, &tol()).unwrap();
        assert!(ext.is_lagrangian(FormKind::ZeroMinus, &tol()));
        assert!(!ext.is_graph(&tol()));
        let k = ext.kernel_of_inverse(&tol());
        assert!(k.approx_eq(&ComplexSubspace::coordinate(2, &[1]).unwrap(), &tol()));
    }

    #[test]
    fn self_adjoint_relation_extends_to_itself() {
        let v = LinearRelation::graph(&cdiag(&[1.0, -4.0]), &tol()).unwrap();
        let ext = extend(&v, &CMatrix::zeros(0, 0), &tol()).unwrap();
        assert!(ext.approx_eq(&v, &tol()));
    }

    #[test]
    fn extension_rejects_bad_u0() {
        let bad = CMatrix::from_element(1, 1, c64(2.0, 0.0));
        assert!(matches!(extend(&model(), &bad, &tol()), Err(Error::NotUnitary { .. })));
        let wrong = CMatrix::identity(2, 2);
        assert!(matches!(extend(&model(), &wrong, &tol()), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn full_domain_operator_has_no_deficiency() {
        let a = OperatorWithDomain::full(&cdiag(&[1.0, 2.0, -1.0])).unwrap();
        let r = deficiency_of_operator(&a, &tol()).unwrap();
        assert_eq!(r.data.indices(), (0, 0));
        assert!(r.agrees(&tol()));
    }

    #[test]
    fn restricted_scalar_deficiencies() {
        let d = ComplexSubspace::coordinate(2, &[0]).unwrap();
        let a = OperatorWithDomain::restrict(&cdiag(&[2.0, 0.0]), d, &tol()).unwrap();
        let r = deficiency_of_operator(&a, &tol()).unwrap();
        let e2 = ComplexSubspace::coordinate(2, &[1]).unwrap();
        assert!(r.data.n_plus.approx_eq(&e2, &tol()));
        assert!(r.data.n_minus.approx_eq(&e2, &tol()));
        assert!(r.agrees(&tol()));

        let d3 = ComplexSubspace::coordinate(3, &[0]).unwrap();
        let a3 = OperatorWithDomain::restrict(&cdiag(&[2.0, 0.0, 0.0]), d3, &tol()).unwrap();
        let r3 = deficiency_of_operator(&a3, &tol()).unwrap();
        assert_eq!(r3.data.indices(), (2, 2));
        assert!(r3.agrees(&tol()));
    }

    #[test]
    fn operator_leaving_its_domain() {
        // Restriction of a Hermitian 2x2 to <e1>: A e1 = e1 + e2.
        let h = CMatrix::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)]);
        let d = ComplexSubspace::coordinate(2, &[0]).unwrap();
        let a = OperatorWithDomain::restrict_into(&h, d, ComplexSubspace::full(2), &tol()).unwrap();
        let r = deficiency_of_operator(&a, &tol()).unwrap();
        assert_eq!(r.data.indices(), (1, 1));
        assert!(r.agrees(&tol()));
        assert!(r.data.cayley_identity_residual(&a) < 1e-12);
    }
}
