//! Local orbit embeddings and the non-closedness witnesses.

use gqd_core::json::{matrix_from_json, matrix_to_json, JsonMatrix};
use gqd_core::orbits::{closedness_witness, embed_orbit, proximity, OrbitEmbedding, WitnessCase, WitnessReport};
use gqd_core::sampling::{random_density, random_near_identity_unitary};
use gqd_core::{DensityMatrix, Tolerance};
use rand::Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{CliError, Result};
use crate::report::Report;
use crate::scenario::Context;

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct EmbedParams {
    rho: Option<JsonMatrix>,
    rho_prime: Option<JsonMatrix>,
    #[serde(default = "default_embed_trials")]
    trials: usize,
    #[serde(default = "default_embed_dim")]
    max_dim: usize,
    #[serde(default = "default_conjugation_tol")]
    conjugation_tol: f64,
}

fn default_embed_trials() -> usize {
    100
}

fn default_embed_dim() -> usize {
    32
}

fn default_conjugation_tol() -> f64 {
    1e-8
}

fn density(rows: &JsonMatrix, tol: &Tolerance) -> Result<DensityMatrix> {
    Ok(DensityMatrix::new(matrix_from_json(rows, None)?, tol)?)
}

#[derive(Default)]
struct Worst {
    x_gram_min: f64,
    intertwining: f64,
    conjugation: f64,
    unitarity: f64,
}

impl Worst {
    fn absorb(&mut self, e: &OrbitEmbedding) {
        self.x_gram_min = self.x_gram_min.min(e.x_gram_min);
        self.intertwining = self.intertwining.max(e.intertwining_residual);
        self.conjugation = self.conjugation.max(e.conjugation_residual);
        self.unitarity = self.unitarity.max(e.unitarity_defect);
    }
}

/// `ρ' = V ρ V^†` with `V` close enough to the identity for the embedding.
fn nearby_pair<R: Rng>(rng: &mut R, n: usize, tol: &Tolerance) -> Result<(DensityMatrix, DensityMatrix, f64)> {
    let rank = rng.random_range(1..=n);
    let rho = random_density(rng, n, rank);
    let mut eps = 0.2;
    loop {
        let v = random_near_identity_unitary(rng, n, eps);
        let c = rho.conjugate(&v);
        let rho_p = DensityMatrix::new((&c + c.adjoint()) * gqd_core::c64(0.5, 0.0), tol)?;
        let prox = proximity(&rho, &rho_p, tol)?;
        if prox <= 0.5 {
            return Ok((rho, rho_p, prox));
        }
        eps /= 2.0;
        if eps < 1e-12 {
            return Err(CliError::schema("could not sample a nearby orbit point"));
        }
    }
}

pub fn orbit_embed(ctx: &Context, params: &Value) -> Result<Report> {
    let p: EmbedParams = ctx.params(params)?;
    let tol = &ctx.tol;
    let mut r = ctx.report();
    let mut worst = Worst { x_gram_min: f64::INFINITY, ..Default::default() };
    match (&p.rho, &p.rho_prime) {
        (Some(a), Some(b)) => {
            let (rho, rho_p) = (density(a, tol)?, density(b, tol)?);
            let e = embed_orbit(&rho, &rho_p, tol)?;
            worst.absorb(&e);
            r.put("proximity", e.proximity);
            r.put("u", matrix_to_json(&e.u));
        }
        (None, None) => {
            if p.max_dim == 0 {
                return Err(CliError::schema("maxDim must be positive"));
            }
            let mut rng = ctx.rng();
            let mut proximities = Vec::with_capacity(p.trials);
            for _ in 0..p.trials {
                let n = rng.random_range(1..=p.max_dim);
                let (rho, rho_p, prox) = nearby_pair(&mut rng, n, tol)?;
                worst.absorb(&embed_orbit(&rho, &rho_p, tol)?);
                proximities.push(prox);
            }
            r.put("trials", p.trials);
            r.put("proximities", proximities);
        }
        _ => return Err(CliError::schema("orbitEmbed needs both rho and rhoPrime, or neither")),
    }
    r.ge("min eigenvalue of X^† X", worst.x_gram_min, 0.5 - tol.eq_tol);
    r.le("max ||U P_i - Q_i U||", worst.intertwining, tol.eq_tol);
    r.le("max ||U rho U^† - rho'||_1", worst.conjugation, p.conjugation_tol);
    r.le("max unitarity defect of U", worst.unitarity, 10.0 * tol.eq_tol);
    Ok(r)
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind", deny_unknown_fields)]
enum SequenceJson {
    /// `a_k = scale · ratio^k`.
    Geometric {
        ratio: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    /// `a_k = scale · k^{-exponent}`.
    Power {
        exponent: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    Explicit { terms: Vec<f64> },
}

fn one() -> f64 {
    1.0
}

impl SequenceJson {
    fn terms(&self, len: usize) -> Vec<f64> {
        match self {
            SequenceJson::Geometric { ratio, scale } => {
                (1..=len).map(|k| scale * ratio.powi(k as i32)).collect()
            }
            SequenceJson::Power { exponent, scale } => {
                (1..=len).map(|k| scale * (k as f64).powf(-exponent)).collect()
            }
            SequenceJson::Explicit { terms } => terms.clone(),
        }
    }
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct WitnessJson {
    case: u8,
    m: Option<usize>,
    sequence: SequenceJson,
    truncation: usize,
    index: usize,
}

impl WitnessJson {
    fn witness_case(&self) -> Result<WitnessCase> {
        match (self.case, self.m) {
            (1, None) => Ok(WitnessCase::NoKernel),
            (2, Some(m)) => Ok(WitnessCase::FiniteKernel { m }),
            (3, None) => Ok(WitnessCase::InfiniteKernel),
            (2, None) => Err(CliError::schema("case 2 needs the kernel multiplicity m")),
            (c @ (1 | 3), Some(_)) => Err(CliError::schema(format!("case {c} takes no m"))),
            (c, _) => Err(CliError::schema(format!("case must be 1, 2 or 3, got {c}"))),
        }
    }
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct WitnessParams {
    witnesses: Option<Vec<WitnessJson>>,
    #[serde(default = "default_witness_trials")]
    trials: usize,
    #[serde(default = "default_truncation")]
    truncation: usize,
}

fn default_witness_trials() -> usize {
    20
}

fn default_truncation() -> usize {
    64
}

fn check_witness(r: &mut Report, tag: &str, w: &WitnessReport) {
    r.le(format!("{tag}: ||rho_n - rho'||_1 over the tail bound"), w.lhs, w.rhs + r.tolerances.eq_tol);
    r.holds(format!("{tag}: rho_n on the orbit"), w.rho_n_on_orbit);
    r.holds(format!("{tag}: rho' off the orbit"), !w.rho_prime_on_orbit);
    r.holds(
        format!("{tag}: zero multiplicity defect {} = {}", w.zero_defect(), w.predicted_zero_defect),
        w.zero_defect() == w.predicted_zero_defect,
    );
}

pub fn orbit_witness(ctx: &Context, params: &Value) -> Result<Report> {
    let p: WitnessParams = ctx.params(params)?;
    let tol = &ctx.tol;
    let mut r = ctx.report();
    let mut rows = Vec::new();
    if let Some(list) = &p.witnesses {
        for (j, w) in list.iter().enumerate() {
            let case = w.witness_case()?;
            let a = w.sequence.terms(w.truncation);
            let rep = closedness_witness(case, &a, w.truncation, w.index, tol)?;
            check_witness(&mut r, &format!("witness {j} (case {})", w.case), &rep);
            rows.push(rep);
        }
    } else {
        let big_n = p.truncation;
        if big_n < 8 || !big_n.is_multiple_of(2) {
            return Err(CliError::schema(format!("truncation must be even and at least 8, got {big_n}")));
        }
        let mut rng = ctx.rng();
        let mut failures = [0usize; 3];
        for _ in 0..p.trials {
            let decay = 1.1 + rng.random::<f64>();
            let a: Vec<f64> = (1..=big_n)
                .map(|k| (0.5 + rng.random::<f64>()) / (k as f64).powf(decay))
                .collect();
            let index = 1 + rng.random_range(0..big_n / 2 - 1);
            let m = 1 + rng.random_range(0..big_n - index - 1);
            let interleaved = 1 + rng.random_range(0..big_n / 4 + 1);
            for (slot, (case, index)) in [
                (WitnessCase::NoKernel, index),
                (WitnessCase::FiniteKernel { m }, index),
                (WitnessCase::InfiniteKernel, interleaved),
            ]
            .into_iter()
            .enumerate()
            {
                let rep = closedness_witness(case, &a, big_n, index, tol)?;
                if !rep.passes() {
                    failures[slot] += 1;
                }
                rows.push(rep);
            }
        }
        for (slot, f) in failures.iter().enumerate() {
            r.le(format!("case {} failures over {} sequences", slot + 1, p.trials), *f as f64, 0.0);
        }
    }
    r.put(
        "witnesses",
        rows.iter()
            .map(|w| {
                json!({
                    "case": w.case,
                    "index": w.index,
                    "truncation": w.truncation,
                    "lhs": w.lhs,
                    "rhs": w.rhs,
                    "zeroDefect": w.zero_defect(),
                    "predictedZeroDefect": w.predicted_zero_defect,
                    "passes": w.passes(),
                })
            })
            .collect::<Vec<_>>(),
    );
    Ok(r)
}
