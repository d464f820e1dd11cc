//! Schrödinger and Heisenberg evolution.

use gqd_core::evolution::{
    conservation_report, duality_residual, euler_lagrange_residual, evolve_state,
    heisenberg_generator_error, uniform_times,
};
use gqd_core::json::{matrix_from_json, vector_from_json, vector_to_json, JsonMatrix, JsonVector, OperatorJson};
use gqd_core::sampling::{random_density, random_hermitian, random_hermitian_on_domain, random_unit_vector};
use gqd_core::tulczyjew::generate_dynamics;
use gqd_core::{c64, CVector, DensityMatrix, OperatorWithDomain, QuadraticLagrangian, Tolerance};
use rand::Rng;
use serde::Deserialize;
use serde_json::Value;

use super::generation::LagrangianJson;
use crate::error::{CliError, Result};
use crate::report::Report;
use crate::scenario::Context;

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum TimesJson {
    List(Vec<f64>),
    #[serde(rename_all = "camelCase")]
    Uniform {
        #[serde(default)]
        t0: f64,
        dt: f64,
        steps: usize,
    },
}

impl TimesJson {
    /// `steps` intervals, so `steps + 1` samples.
    fn times(&self) -> Vec<f64> {
        match self {
            TimesJson::List(t) => t.clone(),
            TimesJson::Uniform { t0, dt, steps } => uniform_times(*t0, *dt, steps + 1),
        }
    }
}

/// `H` from an explicit operator or the Schrödinger operator of a Lagrangian.
fn generator(
    operator: &Option<OperatorJson>,
    lagrangian: &Option<LagrangianJson>,
    hbar: f64,
    tol: &Tolerance,
) -> Result<OperatorWithDomain> {
    match (operator, lagrangian) {
        (Some(o), None) => Ok(o.to_operator(tol)?),
        (None, Some(l)) => schroedinger_of(&l.build(hbar, tol)?, tol),
        _ => Err(CliError::schema("give exactly one of operator or lagrangian")),
    }
}

fn schroedinger_of(l: &QuadraticLagrangian, tol: &Tolerance) -> Result<OperatorWithDomain> {
    generate_dynamics(l, tol)?
        .schroedinger
        .ok_or_else(|| CliError::schema("the Lagrangian generates no Schrödinger operator"))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct EvolveParams {
    operator: Option<OperatorJson>,
    lagrangian: Option<LagrangianJson>,
    psi0: JsonVector,
    times: TimesJson,
    hbar: Option<f64>,
    #[serde(default = "yes")]
    include_states: bool,
}

fn yes() -> bool {
    true
}

pub fn evolve(ctx: &Context, params: &Value) -> Result<Report> {
    let p: EvolveParams = ctx.params(params)?;
    let tol = &ctx.tol;
    let hbar = ctx.hbar(p.hbar.or(p.lagrangian.as_ref().and_then(|l| l.hbar)))?;
    let a = generator(&p.operator, &p.lagrangian, hbar, tol)?;
    let psi0 = vector_from_json(&p.psi0)?;
    let times = p.times.times();
    let traj = evolve_state(&a, &psi0, &times, hbar, tol)?;
    let cons = conservation_report(&a, &traj, hbar, tol)?;
    let mut r = ctx.report();
    r.le("relative norm drift", cons.norm_drift, tol.eq_tol);
    r.le("relative energy drift", cons.energy_drift, tol.eq_tol);
    r.le("unitarity defect of U_t", cons.unitarity_defect, 10.0 * tol.eq_tol);
    r.put("hbar", hbar);
    r.put("conservation", &cons);
    r.put("times", &traj.times);
    if p.include_states {
        let states: Vec<JsonVector> = traj.states.iter().map(vector_to_json).collect();
        r.put("states", states);
    }
    Ok(r)
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct DualityParams {
    operator: Option<OperatorJson>,
    lagrangian: Option<LagrangianJson>,
    rho0: Option<JsonMatrix>,
    observable: Option<JsonMatrix>,
    #[serde(default = "default_duality_times")]
    times: TimesJson,
    hbar: Option<f64>,
    /// Random instances used when no operator is given.
    #[serde(default = "default_duality_trials")]
    trials: usize,
    #[serde(default = "default_duality_dim")]
    max_dim: usize,
}

fn default_duality_times() -> TimesJson {
    TimesJson::Uniform { t0: 0.0, dt: 0.5, steps: 20 }
}

fn default_duality_trials() -> usize {
    20
}

fn default_duality_dim() -> usize {
    12
}

/// `max |tr(ρ_t T) − tr(ρ₀ T_t)|` for random instances with proper domains.
fn random_duality<R: Rng>(rng: &mut R, trials: usize, max_dim: usize, times: &[f64], hbar: f64, tol: &Tolerance) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let n = rng.random_range(1..=max_dim);
        let k = rng.random_range(1..=n);
        let a = random_hermitian_on_domain(rng, n, k);
        let rank = rng.random_range(1..=n);
        let rho0 = random_density(rng, n, rank);
        let t_obs = random_hermitian(rng, n);
        worst = worst.max(duality_residual(&a, &rho0, &t_obs, times, hbar, tol)?);
    }
    Ok(worst)
}

pub fn duality_check(ctx: &Context, params: &Value) -> Result<Report> {
    let p: DualityParams = ctx.params(params)?;
    let tol = &ctx.tol;
    let hbar = ctx.hbar(p.hbar.or(p.lagrangian.as_ref().and_then(|l| l.hbar)))?;
    let times = p.times.times();
    let residual = if p.operator.is_none() && p.lagrangian.is_none() {
        if p.rho0.is_some() || p.observable.is_some() {
            return Err(CliError::schema("rho0 and observable need an operator or lagrangian"));
        }
        if p.max_dim == 0 {
            return Err(CliError::schema("maxDim must be positive"));
        }
        random_duality(&mut ctx.rng(), p.trials, p.max_dim, &times, hbar, tol)?
    } else {
        let a = generator(&p.operator, &p.lagrangian, hbar, tol)?;
        let (Some(rho0), Some(obs)) = (&p.rho0, &p.observable) else {
            return Err(CliError::schema("dualityCheck with an operator needs rho0 and observable"));
        };
        let rho0 = DensityMatrix::new(matrix_from_json(rho0, None)?, tol)?;
        let t_obs = matrix_from_json(obs, None)?;
        duality_residual(&a, &rho0, &t_obs, &times, hbar, tol)?
    };
    let mut r = ctx.report();
    r.le("max |tr(rho_t T) - tr(rho_0 T_t)|", residual, 10.0 * tol.eq_tol);
    r.put("hbar", hbar);
    Ok(r)
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct DynamicsCheckParams {
    #[serde(default = "default_check_dims")]
    dims: Vec<usize>,
    #[serde(default = "default_t_max")]
    t_max: f64,
    #[serde(default = "default_t_steps")]
    steps: usize,
    #[serde(default = "default_lambdas")]
    lambdas: Vec<f64>,
    #[serde(default = "default_el_dt")]
    el_dt: f64,
    #[serde(default = "default_el_tol")]
    el_tol: f64,
    #[serde(default = "default_tight")]
    energy_tol: f64,
    #[serde(default = "default_tight")]
    duality_tol: f64,
    #[serde(default = "default_ratio")]
    min_ratio: f64,
    hbar: Option<f64>,
}

fn default_check_dims() -> Vec<usize> {
    vec![2, 8, 32]
}

fn default_t_max() -> f64 {
    10.0
}

fn default_t_steps() -> usize {
    200
}

fn default_lambdas() -> Vec<f64> {
    vec![1.0, 2.0, 3.0]
}

fn default_el_dt() -> f64 {
    1e-3
}

fn default_el_tol() -> f64 {
    1e-5
}

fn default_tight() -> f64 {
    1e-9
}

fn default_ratio() -> f64 {
    3.5
}

/// Euler–Lagrange residual of the real part of the flow on `[0, 1]`.
fn el_residual(l: &QuadraticLagrangian, a: &OperatorWithDomain, dt: f64, hbar: f64, tol: &Tolerance) -> Result<f64> {
    let n = l.n();
    let psi0 = CVector::from_fn(n, |k, _| c64(1.0 / (k + 1) as f64, 0.3 * k as f64));
    let steps = (1.0 / dt).round() as usize;
    let traj = evolve_state(a, &psi0, &uniform_times(0.0, dt, steps + 1), hbar, tol)?;
    Ok(euler_lagrange_residual(l, &traj.real_part())?)
}

/// Conservation, duality of the two pictures and the Euler–Lagrange check.
pub fn dynamics_check(ctx: &Context, params: &Value) -> Result<Report> {
    let p: DynamicsCheckParams = ctx.params(params)?;
    let tol = &ctx.tol;
    let hbar = ctx.hbar(p.hbar)?;
    if p.steps == 0 || !(p.t_max > 0.0) || !(p.el_dt > 0.0 && p.el_dt < 0.5) {
        return Err(CliError::schema("need steps > 0, tMax > 0 and 0 < elDt < 0.5"));
    }
    let mut rng = ctx.rng();
    let times = uniform_times(0.0, p.t_max / p.steps as f64, p.steps + 1);
    let (mut energy, mut norm, mut duality, mut heis_ratio) = (0.0f64, 0.0f64, 0.0f64, f64::INFINITY);
    for &n in &p.dims {
        if n == 0 {
            return Err(CliError::schema("dims must be positive"));
        }
        let a = OperatorWithDomain::full(&random_hermitian(&mut rng, n))?;
        let psi0 = random_unit_vector(&mut rng, n);
        let traj = evolve_state(&a, &psi0, &times, hbar, tol)?;
        let cons = conservation_report(&a, &traj, hbar, tol)?;
        energy = energy.max(cons.energy_drift);
        norm = norm.max(cons.norm_drift);
        let rho0 = random_density(&mut rng, n, n);
        let t_obs = random_hermitian(&mut rng, n);
        duality = duality.max(duality_residual(&a, &rho0, &t_obs, &times, hbar, tol)?);
        let e1 = heisenberg_generator_error(&a, &t_obs, 0.7, 1e-2, hbar, tol)?;
        let e2 = heisenberg_generator_error(&a, &t_obs, 0.7, 5e-3, hbar, tol)?;
        heis_ratio = heis_ratio.min(if e2 > 0.0 { e1 / e2 } else { f64::INFINITY });
    }
    let lambdas: Vec<Option<f64>> = p.lambdas.iter().copied().map(Some).collect();
    let l = QuadraticLagrangian::diagonal(&lambdas, &[], hbar, tol)?;
    let a = schroedinger_of(&l, tol)?;
    let r1 = el_residual(&l, &a, p.el_dt, hbar, tol)?;
    let r2 = el_residual(&l, &a, p.el_dt / 2.0, hbar, tol)?;

    let mut r = ctx.report();
    r.le("relative energy drift on [0, tMax]", energy, p.energy_tol);
    r.le("relative norm drift on [0, tMax]", norm, p.energy_tol);
    r.le("Schrödinger/Heisenberg duality residual", duality, p.duality_tol);
    r.ge("Heisenberg generator error ratio under step halving", heis_ratio, p.min_ratio);
    r.le("Euler-Lagrange residual of Re psi", r1, p.el_tol);
    r.ge("Euler-Lagrange residual ratio under step halving", r1 / r2, p.min_ratio);
    r.put("hbar", hbar);
    r.put("eulerLagrangeResiduals", [r1, r2]);
    Ok(r)
}
