//! Brute-force enumeration of the Lagrangian extensions of a symmetric
//! relation with deficiency indices `(1, 1)`.
//!
//! Every `ω₀₋`-Lagrangian `L ⊇ V` has the form `V ⊕ ℓ` for an isotropic line
//! `ℓ` in `W = V^{⊥ω} ⊖ V`. With `W = span(b₁, b₂)` the lines are
//! `w = cos α b₁ + e^{iβ} sin α b₂`, `α ∈ [0, π/2]`, `β ∈ [0, 2π)`, and the
//! isotropy condition is the zero set of a real quadratic `f(α, β)`. Grid
//! points near that zero set are compared against the lines produced by the
//! Cayley parametrization `U₀ = e^{iθ}`.

use std::f64::consts::PI;

use gqd_core::extensions::extend_with;
use gqd_core::linalg::{canonical_frame, spectral_decomp_hermitian};
use gqd_core::relations::gram_matrix;
use gqd_core::{c64, CMatrix, CayleyData, ComplexSubspace, FormKind, LinearRelation, Tolerance, C64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct EnumerationParams {
    #[serde(default = "default_resolution")]
    pub resolution: f64,
    /// Bound on `|f|` for a grid point to count; defaults to the resolution.
    pub threshold: Option<f64>,
    #[serde(default = "default_coverage")]
    pub coverage_samples: usize,
}

fn default_resolution() -> f64 {
    1e-3
}

fn default_coverage() -> usize {
    64
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EnumerationSummary {
    pub resolution: f64,
    pub grid_points: usize,
    pub candidates: usize,
    pub family_size: usize,
    pub unmatched: usize,
    pub refinements: usize,
    /// Largest line distance `1 − |⟨w, w_θ⟩|²` from a candidate to the family.
    pub worst_distance: f64,
    /// Largest line distance from a family member to the candidates.
    pub worst_coverage: f64,
    pub match_tol: f64,
    /// `|⟨bᵢ, G b_j⟩|` for the restricted form on `W`.
    pub restricted_form: [[f64; 2]; 2],
}

type Line = [C64; 2];

fn line_distance(a: &Line, b: &Line) -> f64 {
    let ov = a[0].conj() * b[0] + a[1].conj() * b[1];
    (1.0 - ov.norm_sqr()).max(0.0)
}

/// Orthonormal basis of `V^{⊥ω} ⊖ V`.
fn complement_basis(v: &LinearRelation, tol: &Tolerance) -> Result<CMatrix> {
    let s = v.ortho_complement(FormKind::ZeroMinus, tol);
    let pv = v.space().projector();
    let m = pv.nrows();
    let rest = (CMatrix::identity(m, m) - pv) * s.frame();
    let w = canonical_frame(&ComplexSubspace::span(&rest, tol));
    if w.dim() != 2 {
        return Err(CliError::schema(format!(
            "enumeration needs deficiency indices (1, 1); the complement has dimension {}",
            w.dim()
        )));
    }
    Ok(w.into_frame())
}

struct Family<'a> {
    data: &'a CayleyData,
    basis: &'a CMatrix,
    residual: CMatrix,
    tol: &'a Tolerance,
}

impl Family<'_> {
    /// The line `(I − P_V) L_θ` in `(b₁, b₂)` coordinates.
    fn line(&self, theta: f64) -> Result<Line> {
        let u0 = CMatrix::from_element(1, 1, C64::from_polar(1.0, theta));
        let ext = extend_with(self.data, &u0, self.tol)?;
        let c = self.basis.adjoint() * &self.residual * ext.frame();
        let q = &c * c.adjoint();
        let eig = spectral_decomp_hermitian(&q, self.tol)?;
        let top = eig.eigenvectors.column(1);
        Ok([top[0], top[1]])
    }

    fn best_refined(&self, w: &Line, theta: f64, step: f64) -> Result<f64> {
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (theta - step, theta + step);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let mut fc = line_distance(w, &self.line(c)?);
        let mut fd = line_distance(w, &self.line(d)?);
        for _ in 0..40 {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = line_distance(w, &self.line(c)?);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = line_distance(w, &self.line(d)?);
            }
        }
        Ok(fc.min(fd))
    }
}

pub fn enumerate_extensions(
    v: &LinearRelation,
    data: &CayleyData,
    p: &EnumerationParams,
    tol: &Tolerance,
) -> Result<EnumerationSummary> {
    let res = p.resolution;
    if !(res.is_finite() && res > 0.0 && res <= 0.1) {
        return Err(CliError::schema(format!("resolution must lie in (0, 0.1], got {res}")));
    }
    let threshold = p.threshold.unwrap_or(res);
    let basis = complement_basis(v, tol)?;
    let g = gram_matrix(FormKind::ZeroMinus, v.n());
    let gw = basis.adjoint() * &g * &basis;
    let (g11, g22, g12) = (gw[(0, 0)].re, gw[(1, 1)].re, gw[(0, 1)]);

    let n_alpha = (PI / 2.0 / res).round() as usize + 1;
    let n_beta = (2.0 * PI / res).ceil() as usize;
    let betas: Vec<(f64, f64)> = (0..n_beta)
        .map(|j| {
            let b = j as f64 * res;
            (b.cos(), b.sin())
        })
        .collect();
    let mut candidates: Vec<Line> = Vec::new();
    let mut row = vec![0.0; n_beta];
    for i in 0..n_alpha {
        let alpha = (i as f64 * res).min(PI / 2.0);
        let (s, c) = alpha.sin_cos();
        for (j, &(cb, sb)) in betas.iter().enumerate() {
            let cross = cb * g12.re - sb * g12.im;
            row[j] = (c * c * g11 + s * s * g22 + 2.0 * c * s * cross).abs();
        }
        for j in 0..n_beta {
            let prev = row[(j + n_beta - 1) % n_beta];
            let next = row[(j + 1) % n_beta];
            if row[j] <= threshold && row[j] <= prev && row[j] <= next {
                let (cb, sb) = betas[j];
                candidates.push([c64(c, 0.0), c64(cb, sb) * s]);
            }
        }
    }

    let pv = v.space().projector();
    let m = pv.nrows();
    let family = Family {
        data,
        basis: &basis,
        residual: CMatrix::identity(m, m) - pv,
        tol,
    };
    let n_theta = (2.0 * PI / res).ceil() as usize;
    let step = 2.0 * PI / n_theta as f64;
    let lines: Vec<Line> = (0..n_theta)
        .map(|k| family.line(k as f64 * step))
        .collect::<Result<_>>()?;

    let match_tol = res * res;
    let (mut worst, mut unmatched, mut refinements) = (0.0f64, 0usize, 0usize);
    for w in &candidates {
        let (k, d) = lines
            .iter()
            .enumerate()
            .map(|(k, l)| (k, line_distance(w, l)))
            .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
        let d = if d > match_tol {
            refinements += 1;
            d.min(family.best_refined(w, k as f64 * step, step)?)
        } else {
            d
        };
        if d > match_tol {
            unmatched += 1;
        }
        worst = worst.max(d);
    }

    let mut coverage = 0.0f64;
    for k in 0..p.coverage_samples {
        let l = family.line(2.0 * PI * k as f64 / p.coverage_samples as f64)?;
        let d = candidates
            .iter()
            .map(|w| line_distance(w, &l))
            .fold(f64::INFINITY, f64::min);
        coverage = coverage.max(d);
    }

    Ok(EnumerationSummary {
        resolution: res,
        grid_points: n_alpha * n_beta,
        candidates: candidates.len(),
        family_size: n_theta,
        unmatched,
        refinements,
        worst_distance: worst,
        worst_coverage: coverage,
        match_tol,
        restricted_form: [[g11.abs(), g12.norm()], [g12.norm(), g22.abs()]],
    })
}
