//! Cayley transfer of forms, deficiency spaces and self-adjoint extensions.

use std::f64::consts::PI;

use gqd_core::extensions::{
    cayley_vector, deficiency_of_operator, extend_with, partial_isometry_of, summarize_extension,
};
use gqd_core::json::RelationJson;
use gqd_core::linalg::spectral_decomp_hermitian;
use gqd_core::relations::gram_matrix;
use gqd_core::sampling::{random_cvector, random_symmetric_operator};
use gqd_core::{c64, CMatrix, CVector, CayleyData, FormKind, LinearRelation, Tolerance, C64};
use rand::Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use super::enumeration::{enumerate_extensions, EnumerationParams};
use crate::error::{CliError, Result};
use crate::report::Report;
use crate::scenario::Context;

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct ExtendParams {
    relation: RelationJson,
    thetas: Option<Vec<f64>>,
    /// Angles in units of `π`.
    thetas_over_pi: Option<Vec<f64>>,
    /// `K` equally spaced angles `2πj/K`.
    theta_grid: Option<usize>,
    /// Expected spectrum of the extension compressed to `N₊`, one entry
    /// per angle; `null` where the extension is not a graph.
    expected_deficiency_eigenvalues: Option<Vec<Option<Vec<f64>>>>,
    #[serde(default = "default_eig_tol")]
    eigenvalue_tol: f64,
    brute_force: Option<EnumerationParams>,
}

fn default_eig_tol() -> f64 {
    1e-9
}

impl ExtendParams {
    fn angles(&self) -> Result<Vec<f64>> {
        let given = [self.thetas.is_some(), self.thetas_over_pi.is_some(), self.theta_grid.is_some()];
        if given.iter().filter(|&&g| g).count() != 1 {
            return Err(CliError::schema(
                "extend needs exactly one of thetas, thetasOverPi or thetaGrid",
            ));
        }
        Ok(if let Some(t) = &self.thetas {
            t.clone()
        } else if let Some(t) = &self.thetas_over_pi {
            t.iter().map(|x| x * PI).collect()
        } else {
            let k = self.theta_grid.expect("checked");
            if k == 0 {
                return Err(CliError::schema("thetaGrid must be positive"));
            }
            (0..k).map(|j| 2.0 * PI * j as f64 / k as f64).collect()
        })
    }
}

/// Spectrum of `F^† A F` for the `N₊` frame `F`, when `N₊` lies in the domain.
fn deficiency_spectrum(ext: &LinearRelation, data: &CayleyData, tol: &Tolerance) -> Result<Option<Vec<f64>>> {
    let op = ext.decompose_self_adjoint(FormKind::ZeroMinus, tol)?;
    let f = data.n_plus.frame();
    if f.ncols() == 0 || !op.domain.contains(&data.n_plus, tol) {
        return Ok(None);
    }
    let a = op.ambient_matrix();
    let c = f.adjoint() * a * f;
    let c = (&c + c.adjoint()) * c64(0.5, 0.0);
    Ok(Some(spectral_decomp_hermitian(&c, tol)?.eigenvalues))
}

pub fn extend(ctx: &Context, params: &Value) -> Result<Report> {
    let p: ExtendParams = ctx.params(params)?;
    let tol = &ctx.tol;
    let v = p.relation.to_relation(tol)?;
    let data = partial_isometry_of(&v, tol)?;
    let (dp, dm) = data.indices();
    if dp != dm {
        return Err(CliError::schema(format!(
            "deficiency indices ({dp}, {dm}) differ; no self-adjoint extension exists"
        )));
    }
    let angles = p.angles()?;
    if let Some(e) = &p.expected_deficiency_eigenvalues {
        if e.len() != angles.len() {
            return Err(CliError::schema("expectedDeficiencyEigenvalues needs one entry per angle"));
        }
    }
    let mut r = ctx.report();
    r.put("indices", [dp, dm]);
    let mut rows = Vec::new();
    for (j, &theta) in angles.iter().enumerate() {
        let u0 = CMatrix::identity(dp, dp) * C64::from_polar(1.0, theta);
        let ext = extend_with(&data, &u0, tol)?;
        let summary = summarize_extension(&ext, tol)?;
        let spectrum = deficiency_spectrum(&ext, &data, tol)?;
        let tag = format!("theta = {theta:.6}");
        r.le(format!("{tag}: zeroMinus Lagrangian defect"), summary.lagrangian_defect, 10.0 * tol.eq_tol);
        r.holds(format!("{tag}: extension contains V"), ext.contains(&v, tol));
        if let Some(expected) = p.expected_deficiency_eigenvalues.as_ref().map(|e| &e[j]) {
            let err = match (expected, &spectrum) {
                (None, None) => 0.0,
                (Some(e), Some(s)) if e.len() == s.len() => {
                    e.iter().zip(s).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
                }
                _ => f64::INFINITY,
            };
            r.le(format!("{tag}: deficiency eigenvalue error"), err, p.eigenvalue_tol);
        }
        rows.push(json!({
            "theta": theta,
            "eigenvalues": summary.eigenvalues,
            "isGraph": summary.is_graph,
            "domainDim": summary.domain_dim,
            "deficiencyEigenvalues": spectrum,
        }));
    }
    r.put("extensions", rows);
    if let Some(bf) = &p.brute_force {
        let e = enumerate_extensions(&v, &data, bf, tol)?;
        r.ge("enumeration found Lagrangian candidates", e.candidates as f64, 1.0);
        r.le("candidates outside the theta family", e.unmatched as f64, 0.0);
        r.le("worst candidate distance to the theta family", e.worst_distance, e.match_tol);
        r.le("worst family member distance to the candidates", e.worst_coverage, e.match_tol);
        r.put("bruteForce", &e);
    }
    Ok(r)
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct FormTransferParams {
    #[serde(default = "default_pairs")]
    pairs: usize,
    #[serde(default = "default_transfer_dim")]
    max_dim: usize,
    #[serde(default = "default_transfer_tol")]
    tol: f64,
}

fn default_pairs() -> usize {
    1000
}

fn default_transfer_dim() -> usize {
    32
}

fn default_transfer_tol() -> f64 {
    1e-10
}

/// The four forms written out blockwise on `(x, x')`, `(y, y')`.
fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn hand_form(kind: FormKind, v: &CVector, w: &CVector) -> C64 {
    let n = v.len() / 2;
    let (x, xp) = v.as_slice().split_at(n);
    let (y, yp) = w.as_slice().split_at(n);
    match kind {
        FormKind::Plus => inner(x, y) + inner(xp, yp),
        FormKind::Minus => inner(xp, yp) - inner(x, y),
        FormKind::ZeroPlus => inner(x, yp) + inner(xp, y),
        FormKind::ZeroMinus => c64(0.0, 1.0) * (inner(xp, y) - inner(x, yp)),
        FormKind::Standard => inner(x, y) + inner(xp, yp),
    }
}

fn negative_eigenvalues(kind: FormKind, n: usize, tol: &Tolerance) -> Result<usize> {
    let ev = spectral_decomp_hermitian(&gram_matrix(kind, n), tol)?.eigenvalues;
    Ok(ev.iter().filter(|&&l| l < 0.0).count())
}

/// The transfer identities exactly as stated, next to the ones the Cayley
/// map actually satisfies.
pub fn form_transfer(ctx: &Context, params: &Value) -> Result<Report> {
    let p: FormTransferParams = ctx.params(params)?;
    let mut rng = ctx.rng();
    let (mut plus, mut zero_minus, mut minus_fixed, mut zero_minus_fixed) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..p.pairs {
        let n = rng.random_range(1..=p.max_dim);
        let v = random_cvector(&mut rng, 2 * n);
        let w = random_cvector(&mut rng, 2 * n);
        let (cv, cw) = (cayley_vector(&v)?, cayley_vector(&w)?);
        let zp = hand_form(FormKind::ZeroPlus, &cv, &cw);
        let m = hand_form(FormKind::Minus, &cv, &cw);
        plus = plus.max((zp - hand_form(FormKind::Plus, &v, &w)).norm());
        zero_minus = zero_minus.max((m - hand_form(FormKind::ZeroMinus, &v, &w)).norm());
        minus_fixed = minus_fixed.max((zp - hand_form(FormKind::Minus, &v, &w)).norm());
        zero_minus_fixed = zero_minus_fixed.max((m + hand_form(FormKind::ZeroMinus, &v, &w)).norm());
    }
    let mut r = ctx.report();
    r.le("<Cv,Cw>_{0+} = <v,w>_+", plus, p.tol);
    r.le("<Cv,Cw>_- = <v,w>_{0-}", zero_minus, p.tol);
    r.le("<Cv,Cw>_{0+} = <v,w>_-", minus_fixed, p.tol);
    r.le("<Cv,Cw>_- = -<v,w>_{0-}", zero_minus_fixed, p.tol);
    let n = p.max_dim;
    r.put("pairs", p.pairs);
    r.put(
        "inertia",
        json!({
            "n": n,
            "plusNegative": negative_eigenvalues(FormKind::Plus, n, &ctx.tol)?,
            "zeroPlusNegative": negative_eigenvalues(FormKind::ZeroPlus, n, &ctx.tol)?,
            "minusNegative": negative_eigenvalues(FormKind::Minus, n, &ctx.tol)?,
            "zeroMinusNegative": negative_eigenvalues(FormKind::ZeroMinus, n, &ctx.tol)?,
        }),
    );
    Ok(r)
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct DeficiencyParams {
    #[serde(default = "default_deficiency_trials")]
    trials: usize,
    #[serde(default = "default_deficiency_dim")]
    max_dim: usize,
    #[serde(default = "default_eig_tol")]
    tol: f64,
}

fn default_deficiency_trials() -> usize {
    100
}

fn default_deficiency_dim() -> usize {
    16
}

/// Range complements of `A ± i` against kernels of the adjoint relation.
pub fn deficiency(ctx: &Context, params: &Value) -> Result<Report> {
    let p: DeficiencyParams = ctx.params(params)?;
    if p.max_dim < 2 {
        return Err(CliError::schema("maxDim must be at least 2"));
    }
    let mut rng = ctx.rng();
    let (mut worst, mut worst_cayley) = (0.0f64, 0.0f64);
    let mut unequal = 0usize;
    let mut dims = Vec::with_capacity(p.trials);
    for _ in 0..p.trials {
        let n = rng.random_range(2..=p.max_dim);
        let m = rng.random_range(1..=n);
        let k = rng.random_range(0..m.min(n - 1) + 1).min(n - 1);
        let a = random_symmetric_operator(&mut rng, n, k, m);
        let rep = deficiency_of_operator(&a, &ctx.tol)?;
        worst = worst.max(rep.discrepancy());
        worst_cayley = worst_cayley.max(rep.data.cayley_identity_residual(&a));
        let (dp, dm) = rep.data.indices();
        if dp != dm {
            unequal += 1;
        }
        dims.push([n, k, m]);
    }
    let mut r = ctx.report();
    r.le("N± projector discrepancy", worst, p.tol);
    r.le("U(A + i) = A - i residual on the domain", worst_cayley, p.tol);
    r.le("instances with unequal indices", unequal as f64, 0.0);
    r.put("trials", p.trials);
    r.put("dimensions", dims);
    Ok(r)
}
