//! Lagrangian generation of Schrödinger operators against closed-form oracles.

use gqd_core::linalg::{complexify_matrix, hermitian_defect};
use gqd_core::relations::{symplectic_value, FormKind};
use gqd_core::sampling::{random_hermitian, random_hermitian_on_domain, random_rmatrix, seeded_rng};
use gqd_core::tulczyjew::{
    alpha_inverse_matrix, build_lagrangian_subspace, generate_dynamics, is_omega0_lagrangian,
    lagrangian_of, omega0,
};
use gqd_core::{
    c64, CMatrix, CVector, ComplexSubspace, Constraint, OperatorWithDomain, QuadraticLagrangian,
    RMatrix, RVector, RealSubspace, Tolerance,
};

fn tol() -> Tolerance {
    Tolerance::default()
}

/// Full-domain Lagrangian whose Legendre data reproduce `ẋ = -i K x`.
///
/// With `K = Kr + i Ki` and `Kr` invertible, matching `p = ∂L/∂q̇` and
/// `ṗ = ∂L/∂q` against the real and imaginary parts of `ẋ = -iKx` gives
/// `B22 = Kr⁻¹`, `B21 = −Kr⁻¹Ki`, `B12 = KiKr⁻¹`, `B11 = −Kr − KiKr⁻¹Ki`.
fn legendre_oracle(k: &CMatrix) -> RMatrix {
    let n = k.nrows();
    let kr = k.map(|z| z.re);
    let ki = k.map(|z| z.im);
    let kr_inv = kr.clone().try_inverse().expect("invertible real part");
    let mut b = RMatrix::zeros(2 * n, 2 * n);
    b.view_mut((0, 0), (n, n)).copy_from(&(-&kr - &ki * &kr_inv * &ki));
    b.view_mut((0, n), (n, n)).copy_from(&(&ki * &kr_inv));
    b.view_mut((n, 0), (n, n)).copy_from(&(-&kr_inv * &ki));
    b.view_mut((n, n), (n, n)).copy_from(&kr_inv);
    b
}

/// Hermitian `K` with positive-definite real part.
fn oracle_k(seed: u64, n: usize) -> CMatrix {
    let mut rng = seeded_rng(seed);
    let m = random_rmatrix(&mut rng, n, n);
    let kr = &m * m.transpose() + RMatrix::identity(n, n);
    let h = random_hermitian(&mut rng, n);
    let ki = h.map(|z| z.im);
    CMatrix::from_fn(n, n, |i, j| c64(kr[(i, j)], ki[(i, j)]))
}

fn cdiag(d: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(d.len(), d.iter().map(|&x| c64(x, 0.0))))
}

#[test]
fn legendre_oracle_matches_pipeline() {
    for (seed, n) in [(1, 1), (2, 2), (3, 4), (4, 6)] {
        let k = oracle_k(seed, n);
        for hbar in [1.0, 0.25] {
            let b = legendre_oracle(&k);
            let l = QuadraticLagrangian::from_ambient(n, RealSubspace::full(2 * n), &b, hbar, &tol()).unwrap();
            let r = generate_dynamics(&l, &tol()).unwrap();
            assert!(r.complex_linear && r.lagrangian_zero_plus, "n = {n}");
            let a = r.schroedinger.unwrap();
            let expected = &k * c64(hbar, 0.0);
            assert!(a.domain.is_full());
            assert!(
                (a.ambient_matrix() - &expected).norm() <= 1e-9 * expected.norm(),
                "n = {n}, hbar = {hbar}"
            );
        }
    }
}

#[test]
fn oracle_lagrangian_is_symmetric() {
    let b = legendre_oracle(&oracle_k(9, 5));
    assert!((&b - b.transpose()).norm() <= 1e-12 * b.norm());
}

#[test]
fn perturbed_lagrangian_is_not_complex_linear() {
    let n = 3;
    let mut b = legendre_oracle(&oracle_k(5, n));
    b[(0, 0)] += 0.3;
    let l = QuadraticLagrangian::from_ambient(n, RealSubspace::full(2 * n), &b, 1.0, &tol()).unwrap();
    let r = generate_dynamics(&l, &tol()).unwrap();
    assert!(!r.complex_linear);
    assert!(r.schroedinger.is_none());
}

fn example_one(n: usize) -> (QuadraticLagrangian, Vec<f64>) {
    let lambdas: Vec<f64> = (1..=n).map(|k| k as f64 * 0.5 + 0.25).collect();
    let opt: Vec<Option<f64>> = lambdas.iter().copied().map(Some).collect();
    (QuadraticLagrangian::diagonal(&opt, &[], 1.0, &tol()).unwrap(), lambdas)
}

#[test]
fn example_one_family() {
    for n in [3, 8, 32] {
        let (l, lambdas) = example_one(n);
        let a = generate_dynamics(&l, &tol()).unwrap().schroedinger.unwrap();
        let expected = cdiag(&lambdas);
        assert!((a.ambient_matrix() - &expected).norm() <= 1e-9 * expected.norm(), "n = {n}");
    }
}

#[test]
fn example_two_family_has_kernel_direction() {
    for n in [3, 8, 32] {
        let mut lambdas: Vec<Option<f64>> = (1..=n).map(|k| Some(k as f64)).collect();
        lambdas[0] = Some(0.0);
        let l = QuadraticLagrangian::diagonal(&lambdas, &[Constraint::QdotZero(0)], 1.0, &tol()).unwrap();
        let r = generate_dynamics(&l, &tol()).unwrap();
        assert!(r.is_graph(&tol()));
        let a = r.schroedinger.unwrap();
        assert!(a.domain.is_full());
        let mut d: Vec<f64> = (1..=n).map(|k| k as f64).collect();
        d[0] = 0.0;
        assert!((a.ambient_matrix() - cdiag(&d)).norm() <= 1e-9 * (n as f64));
    }
}

#[test]
fn example_three_family_is_not_a_graph() {
    for n in [3, 8, 32] {
        let mut lambdas: Vec<Option<f64>> = (1..=n).map(|k| Some(k as f64 + 1.0)).collect();
        lambdas[0] = None;
        let l = QuadraticLagrangian::diagonal(&lambdas, &[Constraint::QZero(0)], 1.0, &tol()).unwrap();
        let r = generate_dynamics(&l, &tol()).unwrap();
        assert!(!r.is_graph(&tol()));
        let domain = r.domain(&tol());
        let expect_domain = ComplexSubspace::coordinate(n, &(1..n).collect::<Vec<_>>()).unwrap();
        assert!((domain.projector() - expect_domain.projector()).norm() <= 1e-9);
        let koi = r.kernel_of_inverse(&tol());
        assert!((koi.projector() - domain.complement(&tol()).projector()).norm() <= 1e-9);
        let a = r.schroedinger.unwrap();
        let mut d: Vec<f64> = (1..=n).map(|k| k as f64 + 1.0).collect();
        d[0] = 0.0;
        assert!((a.ambient_matrix() - cdiag(&d)).norm() <= 1e-9 * (n as f64));
    }
}

#[test]
fn random_round_trips() {
    let mut rng = seeded_rng(2024);
    for trial in 0..50 {
        let n = 2 + trial % 7;
        let k = 1 + trial % n;
        let a = random_hermitian_on_domain(&mut rng, n, k);
        let hbar = if trial % 3 == 0 { 0.5 } else { 1.0 };
        let s = lagrangian_of(&a, hbar, &tol()).unwrap();
        let r = s.generate_dynamics(&tol()).unwrap();
        let out = r.schroedinger.clone().expect("complex linear");
        let a_in = a.ambient_matrix();
        let a_out = out.ambient_matrix();
        assert!(
            (&a_out - &a_in).norm() <= 1e-9 * a_in.norm(),
            "trial {trial}: {:.3e}",
            (&a_out - &a_in).norm()
        );
        assert!((out.domain.projector() - a.domain.projector()).norm() <= 1e-9);
        let koi = r.kernel_of_inverse(&tol());
        assert!((koi.projector() - a.domain.complement(&tol()).projector()).norm() <= 1e-9);
        assert!(hermitian_defect(&a_out) <= 10.0 * tol().eq_tol);
    }
}

#[test]
fn lagrangian_subspaces_have_half_dimension() {
    let mut rng = seeded_rng(77);
    for n in 1..=5 {
        for k in 0..=2 * n {
            let domain = gqd_core::sampling::random_real_subspace(&mut rng, 2 * n, k);
            let m = random_rmatrix(&mut rng, k, k);
            let b = &m + m.transpose();
            let l = QuadraticLagrangian::new(n, domain, b, 1.0, &tol()).unwrap();
            let s = build_lagrangian_subspace(&l, &tol()).unwrap();
            assert_eq!(s.dim(), 2 * n);
            assert!(is_omega0_lagrangian(&s, &tol()).unwrap());
        }
    }
}

/// `ω₀(v, w)` on `(q, q̇, ṗ, p)` equals `ω₀₊` of the permuted, complexified vectors.
#[test]
fn alpha_is_symplectic() {
    let n = 3;
    let p = alpha_inverse_matrix(n);
    let complexify = |v: &RVector| -> CVector {
        let u = &p * v;
        gqd_core::relations::real_to_complex(u.as_slice(), n)
    };
    for i in 0..4 * n {
        for j in 0..4 * n {
            let mut v = RVector::zeros(4 * n);
            let mut w = RVector::zeros(4 * n);
            v[i] = 1.0;
            w[j] = 1.0;
            let lhs = omega0(&v, &w).unwrap();
            let rhs = symplectic_value(FormKind::ZeroPlus, &complexify(&v), &complexify(&w)).unwrap();
            assert!((lhs - rhs).abs() <= 10.0 * tol().eq_tol, "({i}, {j}): {lhs} vs {rhs}");
        }
    }
}

#[test]
fn laplacian_round_trip_through_spectral_basis() {
    let n = 5;
    let lap = complexify_matrix(&gqd_core::tulczyjew::discretized_laplacian(n, 1.0, 1.0).unwrap());
    let a = OperatorWithDomain::full(&lap).unwrap();
    let s = lagrangian_of(&a, 1.0, &tol()).unwrap();
    let out = s.generate_dynamics(&tol()).unwrap().schroedinger.unwrap();
    assert!((out.ambient_matrix() - &lap).norm() <= 1e-9 * lap.norm());
}
