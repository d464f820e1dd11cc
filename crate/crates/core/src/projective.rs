//! Kähler geometry of the projective space of pure states.
//!
//! A pure state is the rank-one projector `ρ_ψ = |ψ><ψ| / ‖ψ‖²`. A tangent
//! vector at `ρ_ψ` is represented by the Hermitian matrix
//! `φ_ψ = |φ><ψ| + |ψ><φ|` with `φ ⊥ ψ`; the representative pair is not
//! unique, since `φ_{αψ} = (ᾱφ)_ψ`, so the metric, symplectic form and
//! Hermitian product are all evaluated from the matrices.

use crate::error::{Error, Result};
use crate::linalg::{
    c64, hermitian_defect, unitarity_defect, CMatrix, CVector, ComplexSubspace, Tolerance, C64,
};
use crate::relations::OperatorWithDomain;

/// A rank-one orthogonal projector with an optional representative vector.
#[derive(Clone, Debug)]
pub struct PureState {
    rho: CMatrix,
    representative: Option<CVector>,
}

impl PureState {
    /// `|ψ><ψ| / ‖ψ‖²`.
    pub fn new(psi: &CVector, tol: &Tolerance) -> Result<Self> {
        crate::linalg::ensure_finite(&CMatrix::from_column_slice(psi.len(), 1, psi.as_slice()))?;
        let norm = psi.norm();
        if norm <= tol.rank_tol {
            return Err(Error::ZeroVector);
        }
        let rho = psi * psi.adjoint() / c64(norm * norm, 0.0);
        Ok(Self {
            rho,
            representative: Some(psi.clone()),
        })
    }

    /// Validates a matrix as a rank-one orthogonal projector.
    pub fn from_projector(rho: CMatrix, tol: &Tolerance) -> Result<Self> {
        if !rho.is_square() {
            return Err(Error::DimensionMismatch("pure state must be square".into()));
        }
        crate::linalg::ensure_finite(&rho)?;
        let defect = hermitian_defect(&rho);
        if defect > tol.eq_tol {
            return Err(Error::NotHermitian { defect });
        }
        let idem = (&rho * &rho - &rho).norm();
        let trace = rho.trace();
        if idem > tol.eq_tol || (trace - c64(1.0, 0.0)).norm() > tol.eq_tol {
            return Err(Error::InvalidDensity(format!(
                "not a rank-one projector (idempotency defect {idem:.3e}, trace {:.6})",
                trace.re
            )));
        }
        Ok(Self {
            rho,
            representative: None,
        })
    }

    pub fn rho(&self) -> &CMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    /// The stored representative, or a unit vector in the range of `ρ`.
    pub fn representative(&self) -> CVector {
        if let Some(v) = &self.representative {
            return v.clone();
        }
        let (j, _) = (0..self.dim())
            .map(|j| (j, self.rho[(j, j)].re))
            .fold((0, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b });
        let col = self.rho.column(j).into_owned();
        let n = col.norm();
        col / c64(n, 0.0)
    }

    pub fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool {
        self.dim() == other.dim() && (&self.rho - &other.rho).norm() <= tol.eq_tol
    }
}

/// A tangent vector `φ_ψ` at a pure state.
#[derive(Clone, Debug)]
pub struct ProjTangent {
    base: PureState,
    psi: CVector,
    phi: CVector,
    matrix: CMatrix,
}

impl ProjTangent {
    pub fn base(&self) -> &PureState {
        &self.base
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Representative pair `(ψ, φ)`.
    pub fn pair(&self) -> (&CVector, &CVector) {
        (&self.psi, &self.phi)
    }

    /// `φ` re-expressed against another representative `ψ'` of the same base.
    fn phi_against(&self, psi: &CVector) -> CVector {
        // (ψ', φ') with ψ' = α ψ equals (ψ, ᾱ φ'); invert for the target ψ.
        let alpha = self.psi.dotc(psi) / c64(self.psi.norm_squared(), 0.0);
        &self.phi / alpha.conj()
    }

    pub fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool {
        self.base.approx_eq(&other.base, tol)
            && (&self.matrix - &other.matrix).norm() <= tol.eq_tol
    }

    pub fn is_zero(&self, tol: &Tolerance) -> bool {
        self.matrix.norm() <= tol.eq_tol
    }
}

/// `|φ><ψ| + |ψ><φ|` for `φ ⊥ ψ`.
pub fn tangent_rep(psi: &CVector, phi: &CVector, tol: &Tolerance) -> Result<ProjTangent> {
    if psi.len() != phi.len() {
        return Err(Error::DimensionMismatch(format!(
            "state of length {} with tangent direction of length {}",
            psi.len(),
            phi.len()
        )));
    }
    let base = PureState::new(psi, tol)?;
    let overlap = psi.dotc(phi).norm() / (psi.norm() * phi.norm().max(f64::MIN_POSITIVE));
    if phi.norm() > 0.0 && overlap > tol.eq_tol {
        return Err(Error::NotOrthogonal { overlap });
    }
    let matrix = phi * psi.adjoint() + psi * phi.adjoint();
    Ok(ProjTangent {
        base,
        psi: psi.clone(),
        phi: phi.clone(),
        matrix,
    })
}

/// Tangent map of `ψ ↦ ρ_ψ`: the part of `φ` orthogonal to `ψ`, divided by `‖ψ‖²`.
pub fn tangent_of_projection(psi: &CVector, phi: &CVector, tol: &Tolerance) -> Result<ProjTangent> {
    if psi.len() != phi.len() {
        return Err(Error::DimensionMismatch(format!(
            "state of length {} with direction of length {}",
            psi.len(),
            phi.len()
        )));
    }
    let n2 = psi.norm_squared();
    if n2.sqrt() <= tol.rank_tol {
        return Err(Error::ZeroVector);
    }
    let perp = resolved_perp(psi, phi, tol);
    tangent_rep(psi, &(perp / c64(n2, 0.0)), tol)
}

/// `J(φ_ψ) = (iφ)_ψ`.
pub fn complex_j(t: &ProjTangent, tol: &Tolerance) -> ProjTangent {
    tangent_rep(&t.psi, &(&t.phi * c64(0.0, 1.0)), tol).expect("orthogonality is preserved")
}

fn check_base(t: &ProjTangent, u: &ProjTangent, tol: &Tolerance) -> Result<()> {
    if t.base.approx_eq(&u.base, tol) {
        Ok(())
    } else {
        Err(Error::BaseMismatch)
    }
}

/// `2 tr(ρ T T')`, equal to `2 <φ, φ'> ‖ψ‖²`.
pub fn hermitian_p(t: &ProjTangent, u: &ProjTangent, tol: &Tolerance) -> Result<C64> {
    check_base(t, u, tol)?;
    Ok((t.base.rho() * &t.matrix * &u.matrix).trace() * c64(2.0, 0.0))
}

/// `−2 Im <φ, φ'> ‖ψ‖²`.
pub fn omega_p(t: &ProjTangent, u: &ProjTangent, tol: &Tolerance) -> Result<f64> {
    Ok(-hermitian_p(t, u, tol)?.im)
}

/// `tr(φ_ψ φ'_ψ)`.
pub fn g_p(t: &ProjTangent, u: &ProjTangent, tol: &Tolerance) -> Result<f64> {
    check_base(t, u, tol)?;
    Ok((&t.matrix * &u.matrix).trace().re)
}

/// `2 Re <φ, φ'> ‖ψ‖²` from the representatives, with `φ'` moved to the
/// representative of `t`.
pub fn g_p_representative(t: &ProjTangent, u: &ProjTangent, tol: &Tolerance) -> Result<f64> {
    check_base(t, u, tol)?;
    let phi_u = u.phi_against(&t.psi);
    Ok(2.0 * t.phi.dotc(&phi_u).re * t.psi.norm_squared())
}

/// `−2 Im <φ, φ'> ‖ψ‖²` from the representatives.
pub fn omega_p_representative(t: &ProjTangent, u: &ProjTangent, tol: &Tolerance) -> Result<f64> {
    check_base(t, u, tol)?;
    let phi_u = u.phi_against(&t.psi);
    Ok(-2.0 * t.phi.dotc(&phi_u).im * t.psi.norm_squared())
}

/// `(U φ)_{U ψ}`, with the base moved to `U ρ U^†`.
pub fn unitary_action_tangent(u: &CMatrix, t: &ProjTangent, tol: &Tolerance) -> Result<ProjTangent> {
    if u.nrows() != t.base.dim() || u.ncols() != t.base.dim() {
        return Err(Error::DimensionMismatch(format!(
            "unitary of size {}x{} acting on pure states of C^{}",
            u.nrows(),
            u.ncols(),
            t.base.dim()
        )));
    }
    let defect = unitarity_defect(u);
    if defect > tol.eq_tol * (u.nrows() as f64).sqrt() {
        return Err(Error::NotUnitary { defect });
    }
    let psi = u * &t.psi;
    let phi = u * &t.phi;
    let base = PureState::new(&psi, tol)?;
    let matrix = u * &t.matrix * u.adjoint();
    Ok(ProjTangent {
        base,
        psi,
        phi,
        matrix,
    })
}

fn check_hermitian_operator(a: &CMatrix, dim: usize, tol: &Tolerance) -> Result<()> {
    if a.nrows() != dim || a.ncols() != dim {
        return Err(Error::DimensionMismatch(format!(
            "operator of size {}x{} on C^{dim}",
            a.nrows(),
            a.ncols()
        )));
    }
    let defect = hermitian_defect(a);
    if defect > tol.eq_tol {
        return Err(Error::NotHermitian { defect });
    }
    Ok(())
}

/// `h(ψ) = <ψ, A ψ> / (2ħ <ψ, ψ>)`.
pub fn reduced_hamiltonian(a: &CMatrix, psi: &CVector, hbar: f64, tol: &Tolerance) -> Result<f64> {
    check_hermitian_operator(a, psi.len(), tol)?;
    check_hbar(hbar)?;
    let n2 = psi.norm_squared();
    if n2.sqrt() <= tol.rank_tol {
        return Err(Error::ZeroVector);
    }
    Ok(psi.dotc(&(a * psi)).re / (2.0 * hbar * n2))
}

fn check_hbar(hbar: f64) -> Result<()> {
    if hbar.is_finite() && hbar > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")))
    }
}

/// Component of `v` orthogonal to `ψ`.
fn perp_to(psi: &CVector, v: &CVector) -> CVector {
    v - psi * (psi.dotc(v) / c64(psi.norm_squared(), 0.0))
}

/// [`perp_to`], with parts below `eq_tol · ‖v‖` set to zero so that roundoff
/// parallel to `ψ` is not read as a tangent direction.
fn resolved_perp(psi: &CVector, v: &CVector, tol: &Tolerance) -> CVector {
    let p = perp_to(psi, v);
    if p.norm() <= tol.eq_tol * v.norm() {
        CVector::zeros(v.len())
    } else {
        p
    }
}

/// `X(ψ) = (−i / (ħ ‖ψ‖²)) ((A ψ)^⊥)_ψ`.
pub fn hamiltonian_field(a: &CMatrix, psi: &CVector, hbar: f64, tol: &Tolerance) -> Result<ProjTangent> {
    check_hermitian_operator(a, psi.len(), tol)?;
    check_hbar(hbar)?;
    field_of(&(a * psi), psi, hbar, tol)
}

fn field_of(a_psi: &CVector, psi: &CVector, hbar: f64, tol: &Tolerance) -> Result<ProjTangent> {
    let n2 = psi.norm_squared();
    if n2.sqrt() <= tol.rank_tol {
        return Err(Error::ZeroVector);
    }
    let phi = resolved_perp(psi, a_psi, tol) * c64(0.0, -1.0 / (hbar * n2));
    tangent_rep(psi, &phi, tol)
}

/// `ψ` is critical for the reduced Hamiltonian iff `A ψ` is parallel to `ψ`.
pub fn is_critical_point(a: &CMatrix, psi: &CVector, tol: &Tolerance) -> Result<bool> {
    check_hermitian_operator(a, psi.len(), tol)?;
    if psi.norm() <= tol.rank_tol {
        return Err(Error::ZeroVector);
    }
    let a_psi = a * psi;
    Ok(perp_to(psi, &a_psi).norm() <= tol.eq_tol * a_psi.norm())
}

/// Reduced dynamics at `ψ ∈ D`: the field of `A` plus the free directions
/// `<ψ>^⊥ ∩ D̄^⊥` along which the constrained dynamics is undetermined.
#[derive(Clone, Debug)]
pub struct ReducedDynamicsSet {
    pub field_part: ProjTangent,
    pub free_directions: ComplexSubspace,
}

pub fn reduced_dynamics_set(
    a: &OperatorWithDomain,
    hbar: f64,
    psi: &CVector,
    tol: &Tolerance,
) -> Result<ReducedDynamicsSet> {
    check_hbar(hbar)?;
    let a_psi = a.apply(psi, tol)?;
    let field_part = field_of(&a_psi, psi, hbar, tol)?;
    let n = a.n();
    let line = ComplexSubspace::span(&CMatrix::from_column_slice(n, 1, psi.as_slice()), tol);
    let free_directions = line
        .complement(tol)
        .intersection(&a.closure.complement(tol), tol)?;
    Ok(ReducedDynamicsSet {
        field_part,
        free_directions,
    })
}
