//! Schrödinger and Heisenberg evolution against conservation laws, the
//! duality of the two pictures and the Euler–Lagrange equations.

use gqd_core::evolution::{
    conservation_report, duality_residual, euler_lagrange_residual, evolve_observable,
    evolve_state, heisenberg_generator_error, propagator, uniform_times, Propagator, Trajectory,
};
use gqd_core::linalg::unitarity_defect;
use gqd_core::sampling::{
    random_density, random_hermitian, random_hermitian_on_domain, random_unit_vector, seeded_rng,
};
use gqd_core::tulczyjew::generate_dynamics;
use gqd_core::{c64, CMatrix, CVector, OperatorWithDomain, QuadraticLagrangian, RVector, Tolerance};

fn tol() -> Tolerance {
    Tolerance::default()
}

#[test]
fn propagators_are_unitary_and_compose() {
    let mut rng = seeded_rng(201);
    for n in [1, 4, 16] {
        let a = OperatorWithDomain::full(&random_hermitian(&mut rng, n)).unwrap();
        let p = Propagator::new(&a, 0.7, &tol()).unwrap();
        for t in [-100.0, -3.5, 0.0, 0.25, 42.0, 100.0] {
            assert!(unitarity_defect(&p.at(t)) <= 10.0 * tol().eq_tol);
        }
        let (t, s) = (1.3, -0.4);
        assert!((p.at(t + s) - p.at(t) * p.at(s)).norm() <= 10.0 * tol().eq_tol);
    }
}

#[test]
fn propagator_on_proper_domain_fixes_the_complement() {
    let mut rng = seeded_rng(202);
    let a = random_hermitian_on_domain(&mut rng, 6, 3);
    let u = propagator(&a, 2.0, 1.0, &tol()).unwrap();
    let perp = a.domain.complement(&tol());
    let f = perp.frame();
    assert!((&u * f - f).norm() <= 1e-12);
}

#[test]
fn norm_and_energy_are_conserved() {
    let mut rng = seeded_rng(203);
    for n in [2, 8, 32] {
        let a = OperatorWithDomain::full(&random_hermitian(&mut rng, n)).unwrap();
        let psi0 = random_unit_vector(&mut rng, n) * c64(3.0, 0.0);
        let times = uniform_times(0.0, 0.05, 201);
        let traj = evolve_state(&a, &psi0, &times, 1.0, &tol()).unwrap();
        let r = conservation_report(&a, &traj, 1.0, &tol()).unwrap();
        assert!(r.norm_drift <= 1e-10, "n = {n}: {r:?}");
        assert!(r.energy_drift <= 1e-9, "n = {n}: {r:?}");
        assert!(r.unitarity_defect <= 10.0 * tol().eq_tol);
    }
}

#[test]
fn observable_spectrum_and_trace_are_constant() {
    let mut rng = seeded_rng(204);
    let n = 5;
    let a = OperatorWithDomain::full(&random_hermitian(&mut rng, n)).unwrap();
    let t_obs = random_hermitian(&mut rng, n);
    let traj = evolve_observable(&a, &t_obs, &[0.0, 0.5, 3.0, 10.0], 1.0, &tol()).unwrap();
    let spec = |m: &CMatrix| gqd_core::linalg::spectral_decomp_hermitian(m, &tol()).unwrap().eigenvalues;
    let s0 = spec(&t_obs);
    for (_, t_t) in traj.iter() {
        assert!((t_t.trace() - t_obs.trace()).norm() <= 1e-11);
        for (x, y) in spec(t_t).iter().zip(&s0) {
            assert!((x - y).abs() <= 1e-11);
        }
    }
}

#[test]
fn schroedinger_and_heisenberg_pictures_agree() {
    let mut rng = seeded_rng(205);
    let times = uniform_times(0.0, 0.5, 21);
    for n in [2, 4, 9] {
        for domain in [n, n / 2] {
            let a = if domain == n {
                OperatorWithDomain::full(&random_hermitian(&mut rng, n)).unwrap()
            } else {
                random_hermitian_on_domain(&mut rng, n, domain)
            };
            let rho0 = random_density(&mut rng, n, 1 + n / 2);
            let t_obs = random_hermitian(&mut rng, n);
            let r = duality_residual(&a, &rho0, &t_obs, &times, 0.8, &tol()).unwrap();
            assert!(r <= 1e-9, "n = {n}, domain = {domain}: {r:.3e}");
        }
    }
}

#[test]
fn heisenberg_generator_error_is_second_order() {
    let mut rng = seeded_rng(206);
    let n = 4;
    let a = OperatorWithDomain::full(&random_hermitian(&mut rng, n)).unwrap();
    let t_obs = random_hermitian(&mut rng, n);
    let e1 = heisenberg_generator_error(&a, &t_obs, 0.7, 1e-2, 1.0, &tol()).unwrap();
    let e2 = heisenberg_generator_error(&a, &t_obs, 0.7, 5e-3, 1.0, &tol()).unwrap();
    assert!(e1 / e2 >= 3.5, "ratio {}", e1 / e2);
}

fn example_one(lambdas: &[f64]) -> QuadraticLagrangian {
    let opt: Vec<Option<f64>> = lambdas.iter().copied().map(Some).collect();
    QuadraticLagrangian::diagonal(&opt, &[], 1.0, &tol()).unwrap()
}

fn real_projection_residual(lambdas: &[f64], dt: f64) -> f64 {
    let l = example_one(lambdas);
    let a = generate_dynamics(&l, &tol()).unwrap().schroedinger.unwrap();
    let n = lambdas.len();
    let psi0 = CVector::from_fn(n, |k, _| c64(1.0 / (k + 1) as f64, 0.3 * k as f64));
    let steps = (1.0 / dt).round() as usize;
    let traj = evolve_state(&a, &psi0, &uniform_times(0.0, dt, steps + 1), 1.0, &tol()).unwrap();
    euler_lagrange_residual(&l, &traj.real_part()).unwrap()
}

#[test]
fn real_part_of_schroedinger_flow_solves_euler_lagrange() {
    let lambdas = [1.0, 2.0, 3.0];
    let r1 = real_projection_residual(&lambdas, 1e-3);
    let r2 = real_projection_residual(&lambdas, 5e-4);
    assert!(r1 <= 1e-5, "residual {r1:.3e}");
    assert!(r1 / r2 >= 3.5, "ratio {}", r1 / r2);
}

#[test]
fn euler_lagrange_negative_control() {
    let l = example_one(&[2.0]);
    let times = uniform_times(0.0, 1e-3, 1001);
    let states = times.iter().map(|&t| RVector::from_element(1, (3.0 * t).sin())).collect();
    let traj = Trajectory::new(times, states).unwrap();
    assert!(euler_lagrange_residual(&l, &traj).unwrap() > 1.0);
}
