//! Schrödinger and Heisenberg evolution generated by a Hermitian operator,
//! and Euler–Lagrange residuals of configuration trajectories.
//!
//! Evolution acts on the closure `D̄` of the operator domain only. Directions
//! orthogonal to `D̄` carry no flow and are left fixed by the propagator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, spectral_decomp_hermitian, CMatrix, CVector, RVector, Tolerance, C64};
use crate::orbits::DensityMatrix;
use crate::relations::OperatorWithDomain;
use crate::tulczyjew::QuadraticLagrangian;

/// States sampled at increasing times.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Trajectory<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
}

impl<S> Trajectory<S> {
    pub fn new(times: Vec<f64>, states: Vec<S>) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} times for {} states",
                times.len(),
                states.len()
            )));
        }
        check_times(&times)?;
        Ok(Self { times, states })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &S)> {
        self.times.iter().copied().zip(&self.states)
    }
}

impl Trajectory<CVector> {
    /// Componentwise real part, as a configuration trajectory.
    pub fn real_part(&self) -> Trajectory<RVector> {
        Trajectory {
            times: self.times.clone(),
            states: self.states.iter().map(|s| s.map(|z| z.re)).collect(),
        }
    }

    pub fn imaginary_part(&self) -> Trajectory<RVector> {
        Trajectory {
            times: self.times.clone(),
            states: self.states.iter().map(|s| s.map(|z| z.im)).collect(),
        }
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonFinite);
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("times must be strictly increasing".into()));
    }
    Ok(())
}

fn check_hbar(hbar: f64) -> Result<()> {
    if hbar.is_finite() && hbar > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")))
    }
}

/// `n` equally spaced times `t0, t0 + dt, …`.
pub fn uniform_times(t0: f64, dt: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| t0 + dt * k as f64).collect()
}

/// Spectral data of `A` on `D̄`, reused across times.
#[derive(Clone, Debug)]
pub struct Propagator {
    /// Ambient eigenvectors spanning `D̄`.
    vectors: CMatrix,
    eigenvalues: Vec<f64>,
    /// Projector onto `D̄^⊥`.
    complement: CMatrix,
    hbar: f64,
}

impl Propagator {
    pub fn new(a: &OperatorWithDomain, hbar: f64, tol: &Tolerance) -> Result<Self> {
        check_hbar(hbar)?;
        if !a.closure_is_domain(tol) {
            return Err(Error::InvalidArgument(
                "operator closure differs from its domain".into(),
            ));
        }
        let m = a.closure_matrix();
        let defect = crate::linalg::hermitian_defect(&m);
        if defect > tol.eq_tol {
            return Err(Error::NotHermitian { defect });
        }
        let eig = spectral_decomp_hermitian(&m, tol)?;
        let frame = a.closure.frame();
        let n = a.n();
        Ok(Self {
            vectors: frame * &eig.eigenvectors,
            eigenvalues: eig.eigenvalues,
            complement: CMatrix::identity(n, n) - frame * frame.adjoint(),
            hbar,
        })
    }

    /// Ambient `U_t = V diag(e^{-iλt/ħ}) V^† ⊕ I_{D̄^⊥}`.
    pub fn at(&self, t: f64) -> CMatrix {
        let phases = CVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues
                .iter()
                .map(|&l| C64::from_polar(1.0, -l * t / self.hbar)),
        );
        let scaled = CMatrix::from_fn(self.vectors.nrows(), self.vectors.ncols(), |i, j| {
            self.vectors[(i, j)] * phases[j]
        });
        scaled * self.vectors.adjoint() + &self.complement
    }

    pub fn in_closure(&self, x: &CVector, tol: &Tolerance) -> Result<()> {
        let r = (&self.complement * x).norm();
        if r > tol.eq_tol * x.norm().max(1.0) {
            return Err(Error::NotInDomain { residual: r });
        }
        Ok(())
    }
}

/// `exp(-i t A / ħ)` on `D̄`, extended by the identity on `D̄^⊥`.
pub fn propagator(a: &OperatorWithDomain, t: f64, hbar: f64, tol: &Tolerance) -> Result<CMatrix> {
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(Propagator::new(a, hbar, tol)?.at(t))
}

/// `ψ(t) = U_t ψ0`.
pub fn evolve_state(
    a: &OperatorWithDomain,
    psi0: &CVector,
    times: &[f64],
    hbar: f64,
    tol: &Tolerance,
) -> Result<Trajectory<CVector>> {
    check_times(times)?;
    if psi0.len() != a.n() {
        return Err(Error::DimensionMismatch(format!(
            "state of length {} for operator on C^{}",
            psi0.len(),
            a.n()
        )));
    }
    let prop = Propagator::new(a, hbar, tol)?;
    prop.in_closure(psi0, tol)?;
    let states = times.iter().map(|&t| prop.at(t) * psi0).collect();
    Trajectory::new(times.to_vec(), states)
}

fn check_square(name: &str, m: &CMatrix, n: usize) -> Result<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{name} is {}x{}, expected {n}x{n}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// Heisenberg picture `T_t = U_t^† T U_t`.
pub fn evolve_observable(
    a: &OperatorWithDomain,
    t_obs: &CMatrix,
    times: &[f64],
    hbar: f64,
    tol: &Tolerance,
) -> Result<Trajectory<CMatrix>> {
    check_times(times)?;
    check_square("observable", t_obs, a.n())?;
    let defect = crate::linalg::hermitian_defect(t_obs);
    if defect > tol.eq_tol {
        return Err(Error::NotHermitian { defect });
    }
    let prop = Propagator::new(a, hbar, tol)?;
    let states = times
        .iter()
        .map(|&t| {
            let u = prop.at(t);
            u.adjoint() * t_obs * u
        })
        .collect();
    Trajectory::new(times.to_vec(), states)
}

/// `max_t |tr(ρ_t T) − tr(ρ0 T_t)|` with `ρ_t = U_t ρ0 U_t^†`.
pub fn duality_residual(
    a: &OperatorWithDomain,
    rho0: &DensityMatrix,
    t_obs: &CMatrix,
    times: &[f64],
    hbar: f64,
    tol: &Tolerance,
) -> Result<f64> {
    check_square("density matrix", rho0.rho(), a.n())?;
    let heis = evolve_observable(a, t_obs, times, hbar, tol)?;
    let prop = Propagator::new(a, hbar, tol)?;
    let mut worst: f64 = 0.0;
    for (t, t_t) in heis.iter() {
        let rho_t = rho0.conjugate(&prop.at(t));
        let schr = (rho_t * t_obs).trace();
        let heis = (rho0.rho() * t_t).trace();
        worst = worst.max((schr - heis).norm());
    }
    Ok(worst)
}

/// `[A, T] = A T − T A`.
pub fn commutator_generator(a: &CMatrix, t: &CMatrix) -> Result<CMatrix> {
    check_square("T", t, a.nrows())?;
    check_square("A", a, a.nrows())?;
    Ok(a * t - t * a)
}

/// Discrepancy between `[A, x y^†]` and `(A x) y^† − x (A^† y)^†`.
///
/// The tensor form reduces to `A x ⊗ ȳ − x ⊗ \overline{A y}` for Hermitian `A`.
pub fn rank_one_commutator_defect(a: &CMatrix, x: &CVector, y: &CVector) -> Result<f64> {
    let n = a.nrows();
    check_square("A", a, n)?;
    if x.len() != n || y.len() != n {
        return Err(Error::DimensionMismatch("vectors do not match the operator".into()));
    }
    let t = x * y.adjoint();
    let tensor = (a * x) * y.adjoint() - x * (a.adjoint() * y).adjoint();
    Ok((commutator_generator(a, &t)? - tensor).norm())
}

/// Hilbert–Schmidt inner product `tr(A^† B)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Result<C64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "{:?} against {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(a.dotc(b))
}

/// `‖(T_{t+δ} − T_{t−δ}) / 2δ − (i/ħ)[A, T_t]‖`.
pub fn heisenberg_generator_error(
    a: &OperatorWithDomain,
    t_obs: &CMatrix,
    t: f64,
    delta: f64,
    hbar: f64,
    tol: &Tolerance,
) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {delta}")));
    }
    let tr = evolve_observable(a, t_obs, &[t - delta, t, t + delta], hbar, tol)?;
    let fd = (&tr.states[2] - &tr.states[0]) / c64(2.0 * delta, 0.0);
    let gen = commutator_generator(&a.ambient_matrix(), &tr.states[1])? * c64(0.0, 1.0 / hbar);
    Ok((fd - gen).norm())
}

/// Largest central-difference residual of `∂L/∂q − d/dt ∂L/∂q̇` over the
/// interior of a uniformly sampled configuration trajectory.
///
/// With `B` split into `(q, q̇)` blocks the residual is
/// `B11 q + (B12 − B21) q̇ − B22 q̈`.
pub fn euler_lagrange_residual(l: &QuadraticLagrangian, traj: &Trajectory<RVector>) -> Result<f64> {
    let n = l.n();
    let k = traj.len();
    if k < 5 {
        return Err(Error::GridTooCoarse { points: k });
    }
    if let Some(s) = traj.states.iter().find(|s| s.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "configuration of length {} for n = {n}",
            s.len()
        )));
    }
    let dt = (traj.times[k - 1] - traj.times[0]) / (k - 1) as f64;
    let uniform = traj
        .times
        .windows(2)
        .all(|w| ((w[1] - w[0]) - dt).abs() <= 1e-9 * dt.abs().max(1.0));
    if !uniform {
        return Err(Error::InvalidArgument("time grid is not uniform".into()));
    }
    let b = l.ambient_b();
    let b11 = b.view((0, 0), (n, n));
    let b12 = b.view((0, n), (n, n));
    let b21 = b.view((n, 0), (n, n));
    let b22 = b.view((n, n), (n, n));
    let gyro = b12 - b21;
    let mut worst: f64 = 0.0;
    for i in 1..k - 1 {
        let q = &traj.states[i];
        let qdot = (&traj.states[i + 1] - &traj.states[i - 1]) / (2.0 * dt);
        let qddot = (&traj.states[i + 1] - 2.0 * q + &traj.states[i - 1]) / (dt * dt);
        let r = b11 * q + &gyro * qdot - b22 * qddot;
        worst = worst.max(r.amax());
    }
    Ok(worst)
}

/// Conserved quantities along a Schrödinger trajectory.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConservationReport {
    /// `max_t |‖ψ(t)‖ − ‖ψ0‖| / ‖ψ0‖`.
    pub norm_drift: f64,
    /// `max_t |h(ψ(t)) − h(ψ0)| / max(|h(ψ0)|, 1)`.
    pub energy_drift: f64,
    pub initial_energy: f64,
    /// `max_t ‖U_t^† U_t − I‖`.
    pub unitarity_defect: f64,
}

pub fn conservation_report(
    a: &OperatorWithDomain,
    traj: &Trajectory<CVector>,
    hbar: f64,
    tol: &Tolerance,
) -> Result<ConservationReport> {
    let amb = a.ambient_matrix();
    let first = traj
        .states
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty trajectory".into()))?;
    let n0 = first.norm();
    let h0 = crate::projective::reduced_hamiltonian(&amb, first, hbar, tol)?;
    let prop = Propagator::new(a, hbar, tol)?;
    let mut norm_drift: f64 = 0.0;
    let mut energy_drift: f64 = 0.0;
    let mut unitarity: f64 = 0.0;
    for (t, s) in traj.iter() {
        norm_drift = norm_drift.max((s.norm() - n0).abs() / n0);
        let h = crate::projective::reduced_hamiltonian(&amb, s, hbar, tol)?;
        energy_drift = energy_drift.max((h - h0).abs() / h0.abs().max(1.0));
        unitarity = unitarity.max(crate::linalg::unitarity_defect(&prop.at(t)));
    }
    Ok(ConservationReport {
        norm_drift,
        energy_drift,
        initial_energy: h0,
        unitarity_defect: unitarity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexSubspace;
    use crate::tulczyjew::QuadraticLagrangian;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn diag(d: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_iterator(d.len(), d.iter().map(|&x| c64(x, 0.0))))
    }

    fn e12() -> CMatrix {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = c64(1.0, 0.0);
        m
    }

    #[test]
    fn propagator_at_zero_is_identity() {
        let a = OperatorWithDomain::full(&diag(&[1.0, -3.0])).unwrap();
        let u = propagator(&a, 0.0, 1.0, &tol()).unwrap();
        assert!((u - CMatrix::identity(2, 2)).norm() < 1e-15);
    }

    #[test]
    fn scalar_propagator_full_turn() {
        let a = OperatorWithDomain::full(&diag(&[2.0])).unwrap();
        let u = propagator(&a, PI, 1.0, &tol()).unwrap();
        assert!((u[(0, 0)] - c64(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn componentwise_phases() {
        let a = OperatorWithDomain::full(&diag(&[1.0, 2.0])).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi0 = CVector::from_vec(vec![c64(s, 0.0), c64(s, 0.0)]);
        let tr = evolve_state(&a, &psi0, &[0.0, PI], 1.0, &tol()).unwrap();
        let expect = CVector::from_vec(vec![c64(-s, 0.0), c64(s, 0.0)]);
        assert!((&tr.states[1] - expect).norm() < 1e-14);
    }

    #[test]
    fn free_directions_are_not_evolved() {
        let d = ComplexSubspace::coordinate(2, &[0]).unwrap();
        let a = OperatorWithDomain::restrict(&diag(&[3.0, 0.0]), d, &tol()).unwrap();
        let u = propagator(&a, 1.0, 1.0, &tol()).unwrap();
        assert_eq!(u[(1, 1)], c64(1.0, 0.0));
        let outside = CVector::from_vec(vec![c64(0.0, 0.0), c64(1.0, 0.0)]);
        assert!(matches!(
            evolve_state(&a, &outside, &[0.0, 1.0], 1.0, &tol()),
            Err(Error::NotInDomain { .. })
        ));
    }

    #[test]
    fn non_hermitian_generator_is_rejected() {
        let a = OperatorWithDomain::full(&e12()).unwrap();
        assert!(matches!(propagator(&a, 1.0, 1.0, &tol()), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn commutator_examples() {
        let a = diag(&[1.0, 2.0]);
        assert_eq!(commutator_generator(&a, &CMatrix::identity(2, 2)).unwrap().norm(), 0.0);
        assert!((commutator_generator(&a, &e12()).unwrap() + e12()).norm() < 1e-15);
        assert_eq!(hs_inner(&e12(), &e12()).unwrap(), c64(1.0, 0.0));
        assert!(commutator_generator(&a, &CMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn duality_with_identity_observable() {
        let a = OperatorWithDomain::full(&diag(&[1.0, 2.0])).unwrap();
        let rho = DensityMatrix::diagonal(&[0.5, 0.5], &tol()).unwrap();
        let r = duality_residual(&a, &rho, &CMatrix::identity(2, 2), &[0.0, 1.0, 2.0], 1.0, &tol()).unwrap();
        assert!(r < 1e-15);
    }

    #[test]
    fn heisenberg_spectrum_is_constant() {
        let a = OperatorWithDomain::full(&diag(&[1.0, 2.0])).unwrap();
        let t = e12() + e12().adjoint() + diag(&[0.5, 0.0]);
        let tr = evolve_observable(&a, &t, &[0.0, 0.7, 3.1], 1.0, &tol()).unwrap();
        let base = spectral_decomp_hermitian(&t, &tol()).unwrap().eigenvalues;
        for s in &tr.states {
            let ev = spectral_decomp_hermitian(s, &tol()).unwrap().eigenvalues;
            for (x, y) in ev.iter().zip(&base) {
                assert_relative_eq!(x, y, epsilon = 1e-12);
            }
        }
    }

    fn oscillator(lambda: f64) -> QuadraticLagrangian {
        QuadraticLagrangian::diagonal(&[Some(lambda)], &[], 1.0, &tol()).unwrap()
    }

    fn sampled(f: impl Fn(f64) -> f64, dt: f64, k: usize) -> Trajectory<RVector> {
        let times = uniform_times(0.0, dt, k);
        let states = times.iter().map(|&t| RVector::from_vec(vec![f(t)])).collect();
        Trajectory::new(times, states).unwrap()
    }

    #[test]
    fn euler_lagrange_on_cosine() {
        let r = euler_lagrange_residual(&oscillator(2.0), &sampled(|t| (2.0 * t).cos(), 1e-3, 2001)).unwrap();
        assert!(r <= 1e-5, "{r}");
    }

    #[test]
    fn euler_lagrange_negative_control() {
        let r = euler_lagrange_residual(&oscillator(2.0), &sampled(|t| (3.0 * t).sin(), 1e-3, 2001)).unwrap();
        // −λq − q̈/λ = (−2 + 9/2) sin(3t).
        assert!(r > 1.0, "{r}");
    }

    #[test]
    fn euler_lagrange_free_direction() {
        let l = QuadraticLagrangian::from_ambient(
            1,
            crate::linalg::RealSubspace::full(2),
            &crate::linalg::RMatrix::zeros(2, 2),
            1.0,
            &tol(),
        )
        .unwrap();
        let r = euler_lagrange_residual(&l, &sampled(|t| t, 1e-2, 11)).unwrap();
        assert!(r < 1e-12);
    }

    #[test]
    fn coarse_grid_is_rejected() {
        assert!(matches!(
            euler_lagrange_residual(&oscillator(1.0), &sampled(|t| t, 0.1, 4)),
            Err(Error::GridTooCoarse { points: 4 })
        ));
    }
}
