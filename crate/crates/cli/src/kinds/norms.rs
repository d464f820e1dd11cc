//! Schatten norms of averaged pure states and their monotonicity in `p`.

use gqd_core::linalg::schatten_norm;
use gqd_core::sampling::random_cmatrix;
use gqd_core::{c64, CMatrix, CVector, PureState};
use rand::Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::report::Report;
use crate::scenario::Context;

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct HullCase {
    n: usize,
    p: f64,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct HullParams {
    cases: Vec<HullCase>,
    #[serde(default = "default_hull_tol")]
    rel_tol: f64,
}

fn default_hull_tol() -> f64 {
    1e-12
}

/// `‖(ρ_{e_1} + … + ρ_{e_n}) / n‖_p` against `n^{(1−p)/p}`.
pub fn convex_hull(ctx: &Context, params: &Value) -> Result<Report> {
    let p: HullParams = ctx.params(params)?;
    let mut r = ctx.report();
    let mut rows = Vec::new();
    for c in &p.cases {
        let n = c.n;
        let mut avg = CMatrix::zeros(n, n);
        for k in 0..n {
            let e = CVector::from_fn(n, |i, _| c64(if i == k { 1.0 } else { 0.0 }, 0.0));
            avg += PureState::new(&e, &ctx.tol)?.rho();
        }
        avg /= c64(n as f64, 0.0);
        let norm = schatten_norm(&avg, c.p)?;
        let expected = (n as f64).powf((1.0 - c.p) / c.p);
        let err = (norm - expected).abs() / expected;
        r.le(format!("n = {n}, p = {}: relative error", c.p), err, p.rel_tol);
        rows.push(json!({
            "n": n,
            "p": c.p,
            "norm": norm,
            "expected": expected,
            "pthPower": norm.powf(c.p),
            "expectedPthPower": (n as f64).powf(1.0 - c.p),
        }));
    }
    r.put("cases", rows);
    Ok(r)
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct MonotonicityParams {
    #[serde(default = "default_samples")]
    samples: usize,
    #[serde(default = "default_max_dim")]
    max_dim: usize,
    /// Finite exponents, all `>= 1`; the operator norm is always appended.
    #[serde(default = "default_exponents")]
    exponents: Vec<f64>,
    #[serde(default = "default_hull_tol")]
    tol: f64,
}

fn default_samples() -> usize {
    500
}

fn default_max_dim() -> usize {
    12
}

fn default_exponents() -> Vec<f64> {
    vec![1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 8.0]
}

/// `‖M‖_{p'} <= ‖M‖_p` for `p <= p'`, as a relative violation.
pub fn schatten_monotonicity(ctx: &Context, params: &Value) -> Result<Report> {
    let p: MonotonicityParams = ctx.params(params)?;
    let mut exps = p.exponents.clone();
    exps.sort_by(f64::total_cmp);
    exps.push(f64::INFINITY);
    let mut rng = ctx.rng();
    let mut worst: f64 = 0.0;
    let mut violations = 0usize;
    for _ in 0..p.samples {
        let rows = rng.random_range(1..=p.max_dim);
        let cols = rng.random_range(1..=p.max_dim);
        let rank = rng.random_range(1..=rows.min(cols));
        let scale = 10f64.powf(rng.random_range(-3.0..3.0));
        let m = random_cmatrix(&mut rng, rows, rank) * random_cmatrix(&mut rng, rank, cols) * c64(scale, 0.0);
        let norms = exps
            .iter()
            .map(|&e| schatten_norm(&m, e))
            .collect::<std::result::Result<Vec<f64>, _>>()?;
        for w in norms.windows(2) {
            let v = ((w[1] - w[0]) / w[0]).max(0.0);
            if v > p.tol {
                violations += 1;
            }
            worst = worst.max(v);
        }
    }
    let mut r = ctx.report();
    r.le("largest relative violation", worst, p.tol);
    r.put("samples", p.samples);
    r.put("exponents", &p.exponents);
    r.put("violations", violations);
    Ok(r)
}
