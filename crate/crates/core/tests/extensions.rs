//! Cayley transform, deficiency spaces and self-adjoint extensions on random inputs.

use gqd_core::extensions::{
    cayley_matrix, cayley_relation, deficiency_of_operator, extend, extend_with,
    inverse_cayley_relation, partial_isometry_of,
};
use gqd_core::relations::{form_value, gram_matrix, FormKind};
use gqd_core::sampling::{
    random_cvector, random_hermitian, random_self_adjoint_relation, random_subspace,
    random_symmetric_operator, random_unitary, seeded_rng,
};
use gqd_core::{c64, CMatrix, LinearRelation, Tolerance, C64};
use std::f64::consts::PI;

fn tol() -> Tolerance {
    Tolerance::default()
}

#[test]
fn cayley_pulls_back_forms() {
    let mut rng = seeded_rng(11);
    for n in [1, 2, 5, 16, 32] {
        let c = cayley_matrix(n);
        for _ in 0..20 {
            let v = random_cvector(&mut rng, 2 * n);
            let w = random_cvector(&mut rng, 2 * n);
            let (cv, cw) = (&c * &v, &c * &w);
            let a = form_value(FormKind::ZeroPlus, &cv, &cw).unwrap();
            let b = form_value(FormKind::Minus, &v, &w).unwrap();
            assert!((a - b).norm() <= 1e-10 * (1.0 + b.norm()));
            let a = form_value(FormKind::Minus, &cv, &cw).unwrap();
            let b = form_value(FormKind::ZeroMinus, &v, &w).unwrap();
            assert!((a + b).norm() <= 1e-10 * (1.0 + b.norm()));
        }
    }
}

/// `⟨·,·⟩₊` is positive definite and `⟨·,·⟩₀₊` is not, so no linear map
/// pulls one back onto the other.
#[test]
fn plus_and_zero_plus_have_different_inertia() {
    let n = 3;
    let ev = |k| {
        gqd_core::linalg::spectral_decomp_hermitian(&gram_matrix(k, n), &tol())
            .unwrap()
            .eigenvalues
    };
    assert!(ev(FormKind::Plus).iter().all(|&l| l > 0.0));
    assert_eq!(ev(FormKind::ZeroPlus).iter().filter(|&&l| l < 0.0).count(), n);
}

#[test]
fn unitary_graphs_pull_back_to_lagrangian_relations() {
    let mut rng = seeded_rng(12);
    for n in 1..=6 {
        let u = random_unitary(&mut rng, n);
        let g = LinearRelation::graph(&u, &tol()).unwrap();
        assert!(g.is_lagrangian(FormKind::Minus, &tol()));
        let v = inverse_cayley_relation(&g, &tol());
        assert!(v.is_lagrangian(FormKind::ZeroMinus, &tol()), "n = {n}");
        let back = cayley_relation(&v, &tol());
        assert!(back.approx_eq(&g, &tol()));
    }
}

#[test]
fn lagrangian_relations_map_to_unitary_graphs() {
    let mut rng = seeded_rng(13);
    for n in 1..=6 {
        for k in 0..=n {
            let v = random_self_adjoint_relation(&mut rng, n, k);
            assert!(v.is_lagrangian(FormKind::ZeroMinus, &tol()));
            let c = cayley_relation(&v, &tol());
            assert!(c.is_graph(&tol()) && c.domain(&tol()).is_full());
            let u = c.as_operator(&tol()).unwrap().ambient_matrix();
            assert!(gqd_core::linalg::unitarity_defect(&u) <= 1e-9);
        }
    }
}

fn random_symmetric_relation(seed: u64, n: usize, k: usize, m: usize) -> LinearRelation {
    random_symmetric_operator(&mut seeded_rng(seed), n, k, m).graph(&tol())
}

#[test]
fn extensions_are_sound_and_injective() {
    let mut rng = seeded_rng(14);
    for (seed, n, k, m) in [(1, 3, 1, 2), (2, 4, 2, 3), (3, 6, 2, 4), (4, 5, 0, 0), (5, 8, 3, 5)] {
        let v = random_symmetric_relation(seed, n, k, m);
        let data = partial_isometry_of(&v, &tol()).unwrap();
        let (dp, dm) = data.indices();
        assert_eq!(dp, dm);
        let u0 = random_unitary(&mut rng, dp);
        let u1 = random_unitary(&mut rng, dp);
        let e0 = extend_with(&data, &u0, &tol()).unwrap();
        let e1 = extend_with(&data, &u1, &tol()).unwrap();
        for e in [&e0, &e1] {
            assert!(e.is_lagrangian(FormKind::ZeroMinus, &tol()));
            assert!(e.contains(&v, &tol()));
        }
        if dp > 0 {
            assert!(e0.distance(&e1) > 1e-6);
        }
    }
}

#[test]
fn theta_grid_extensions_are_distinct() {
    let v = LinearRelation::from_pairs(
        2,
        &[(
            gqd_core::CVector::from_vec(vec![c64(1.0, 0.0), c64(0.0, 0.0)]),
            gqd_core::CVector::from_vec(vec![c64(2.0, 0.0), c64(0.0, 0.0)]),
        )],
        &tol(),
    )
    .unwrap();
    let exts: Vec<LinearRelation> = (0..64)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / 64.0;
            extend(&v, &CMatrix::from_element(1, 1, C64::from_polar(1.0, theta)), &tol()).unwrap()
        })
        .collect();
    for i in 0..exts.len() {
        for j in i + 1..exts.len() {
            assert!(exts[i].distance(&exts[j]) > 1e-3, "{i} vs {j}");
        }
    }
}

fn block_diagonal(u: &CMatrix, w: &CMatrix) -> CMatrix {
    let n = u.nrows();
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(u);
    m.view_mut((n, n), (n, n)).copy_from(w);
    m
}

/// Composing the Cayley map with `U ⊕ U` on either side keeps the pulled-back forms.
#[test]
fn transferred_forms_are_unique_up_to_unitaries() {
    let mut rng = seeded_rng(15);
    let g0p = |n| gram_matrix(FormKind::ZeroPlus, n);
    let g0m = |n| gram_matrix(FormKind::ZeroMinus, n);
    let gm = |n| gram_matrix(FormKind::Minus, n);
    for n in [1, 3, 7, 16] {
        let u = random_unitary(&mut rng, n);
        let v = random_unitary(&mut rng, n);
        for c in [
            cayley_matrix(n) * block_diagonal(&u, &u),
            block_diagonal(&v, &v) * cayley_matrix(n),
        ] {
            assert!(gqd_core::linalg::unitarity_defect(&c) <= 1e-12);
            assert!((c.adjoint() * g0p(n) * &c - gm(n)).norm() <= 1e-10);
            assert!((c.adjoint() * gm(n) * &c + g0m(n)).norm() <= 1e-10);
        }
    }
}

#[test]
fn deficiency_spaces_agree() {
    for seed in 0..40u64 {
        let n = 2 + (seed as usize) % 10;
        let m = 1 + (seed as usize * 7) % n;
        let k = (seed as usize * 3) % (m + 1);
        let a = random_symmetric_operator(&mut seeded_rng(seed), n, k, m);
        let r = deficiency_of_operator(&a, &tol()).unwrap();
        assert!(r.discrepancy() <= 1e-9, "seed {seed}: {}", r.discrepancy());
        assert!(r.data.cayley_identity_residual(&a) <= 1e-9);
    }
}

#[test]
fn restriction_of_hermitian_matrix_has_equal_indices() {
    let mut rng = seeded_rng(16);
    for n in 2..=8 {
        let h = random_hermitian(&mut rng, n);
        let d = random_subspace(&mut rng, n, n / 2);
        let a = gqd_core::OperatorWithDomain::restrict_into(&h, d, gqd_core::ComplexSubspace::full(n), &tol()).unwrap();
        let r = deficiency_of_operator(&a, &tol()).unwrap();
        assert_eq!(r.data.indices(), (n - n / 2, n - n / 2));
        assert!(r.agrees(&tol()));
    }
}
