//! Kähler structure of the projective space and critical points of the
//! reduced Hamiltonian.

use std::collections::BTreeMap;

use gqd_core::projective::{
    complex_j, g_p, g_p_representative, hamiltonian_field, hermitian_p, is_critical_point, omega_p,
    omega_p_representative, reduced_hamiltonian, tangent_of_projection, unitary_action_tangent,
};
use gqd_core::sampling::{random_cvector, random_unit_vector, random_unitary};
use gqd_core::{c64, CMatrix, CVector, ProjTangent, Tolerance, C64};
use rand::Rng;
use serde::Deserialize;
use serde_json::Value;

use crate::error::{CliError, Result};
use crate::report::Report;
use crate::scenario::Context;

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct KahlerParams {
    #[serde(default = "default_samples")]
    samples: usize,
    /// Dimensions to cycle through; otherwise uniform in `2..=maxDim`.
    dims: Option<Vec<usize>>,
    #[serde(default = "default_max_dim")]
    max_dim: usize,
    #[serde(default = "default_kahler_tol")]
    tol: f64,
}

fn default_samples() -> usize {
    1000
}

fn default_max_dim() -> usize {
    32
}

fn default_kahler_tol() -> f64 {
    1e-9
}

fn random_tangent<R: Rng>(rng: &mut R, psi: &CVector, tol: &Tolerance) -> Result<ProjTangent> {
    Ok(tangent_of_projection(psi, &random_cvector(rng, psi.len()), tol)?)
}

/// Largest deviation per identity.
#[derive(Default)]
struct Deviations(BTreeMap<&'static str, f64>);

impl Deviations {
    fn record(&mut self, name: &'static str, v: f64) {
        let e = self.0.entry(name).or_insert(0.0);
        *e = e.max(v);
    }
}

pub fn kahler_check(ctx: &Context, params: &Value) -> Result<Report> {
    let p: KahlerParams = ctx.params(params)?;
    let tol = &ctx.tol;
    if let Some(d) = &p.dims {
        if d.is_empty() || d.iter().any(|&n| n < 2) {
            return Err(CliError::schema("dims must be a nonempty list of dimensions >= 2"));
        }
    } else if p.max_dim < 2 {
        return Err(CliError::schema("maxDim must be at least 2"));
    }
    let mut rng = ctx.rng();
    let mut dev = Deviations::default();
    for i in 0..p.samples {
        let n = match &p.dims {
            Some(d) => d[i % d.len()],
            None => rng.random_range(2..=p.max_dim),
        };
        let psi = random_cvector(&mut rng, n);
        let t = random_tangent(&mut rng, &psi, tol)?;
        let s = random_tangent(&mut rng, &psi, tol)?;
        let jt = complex_j(&t, tol);
        let g = g_p(&t, &s, tol)?;
        let w = omega_p(&t, &s, tol)?;
        dev.record("g(t, s) = omega(Jt, s)", (g - omega_p(&jt, &s, tol)?).abs());
        dev.record("h = g - i omega", (hermitian_p(&t, &s, tol)? - c64(g, -w)).norm());
        dev.record("J^2 = -1", (complex_j(&jt, tol).matrix() + t.matrix()).norm());
        dev.record("g on representatives", (g - g_p_representative(&t, &s, tol)?).abs());
        dev.record("omega on representatives", (w - omega_p_representative(&t, &s, tol)?).abs());
        dev.record("g symmetric", (g - g_p(&s, &t, tol)?).abs());
        dev.record("omega antisymmetric", (w + omega_p(&s, &t, tol)?).abs());
        let u = random_unitary(&mut rng, n);
        let (ut, us) = (unitary_action_tangent(&u, &t, tol)?, unitary_action_tangent(&u, &s, tol)?);
        dev.record("g unitarily invariant", (g_p(&ut, &us, tol)? - g).abs());
        dev.record("omega unitarily invariant", (omega_p(&ut, &us, tol)? - w).abs());
        let jut = unitary_action_tangent(&u, &jt, tol)?;
        dev.record("J commutes with unitaries", (complex_j(&ut, tol).matrix() - jut.matrix()).norm());
    }
    let mut r = ctx.report();
    for (name, v) in &dev.0 {
        r.le(*name, *v, p.tol);
    }
    r.put("samples", p.samples);
    r.put("maxDeviation", dev.0.values().copied().fold(0.0, f64::max));
    Ok(r)
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct CriticalParams {
    #[serde(default = "default_critical_n")]
    n: usize,
    /// Diagonal of `A`; defaults to `1, …, n`.
    spectrum: Option<Vec<f64>>,
    #[serde(default = "default_samples")]
    samples: usize,
    hbar: Option<f64>,
    #[serde(default = "default_value_tol")]
    value_tol: f64,
}

fn default_critical_n() -> usize {
    8
}

fn default_value_tol() -> f64 {
    1e-12
}

pub fn critical_points(ctx: &Context, params: &Value) -> Result<Report> {
    let p: CriticalParams = ctx.params(params)?;
    let tol = &ctx.tol;
    let hbar = ctx.hbar(p.hbar)?;
    let spectrum = p.spectrum.clone().unwrap_or_else(|| (1..=p.n).map(|k| k as f64).collect());
    let n = spectrum.len();
    if n < 2 {
        return Err(CliError::schema("need at least two eigenvalues"));
    }
    let mut sorted = spectrum.clone();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[1] - w[0] <= tol.eig_cluster_tol) {
        return Err(CliError::schema("criticalPoints needs a simple spectrum"));
    }
    let a = CMatrix::from_diagonal(&CVector::from_iterator(n, spectrum.iter().map(|&l| c64(l, 0.0))));
    let mut rng = ctx.rng();
    let (mut missed, mut value_err, mut field) = (0usize, 0.0f64, 0.0f64);
    let mut values = Vec::with_capacity(n);
    for (k, &lambda) in spectrum.iter().enumerate() {
        let phase = C64::from_polar(1.0 + rng.random::<f64>(), rng.random::<f64>() * std::f64::consts::TAU);
        let e = CVector::from_fn(n, |i, _| if i == k { phase } else { c64(0.0, 0.0) });
        if !is_critical_point(&a, &e, tol)? {
            missed += 1;
        }
        let h = reduced_hamiltonian(&a, &e, hbar, tol)?;
        value_err = value_err.max((h - lambda / (2.0 * hbar)).abs());
        field = field.max(hamiltonian_field(&a, &e, hbar, tol)?.matrix().norm());
        values.push(h);
    }
    let mut spurious = 0usize;
    for _ in 0..p.samples {
        let psi = random_unit_vector(&mut rng, n);
        if is_critical_point(&a, &psi, tol)? {
            spurious += 1;
        }
    }
    let mut r = ctx.report();
    r.le("eigenvectors not detected as critical", missed as f64, 0.0);
    r.le("critical value error |h(e_k) - lambda_k / 2hbar|", value_err, p.value_tol);
    r.le("Hamiltonian field at eigenvectors", field, tol.eq_tol);
    r.le("random states detected as critical", spurious as f64, 0.0);
    r.put("hbar", hbar);
    r.put("criticalValues", values);
    Ok(r)
}
