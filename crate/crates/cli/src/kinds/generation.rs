//! Schrödinger operators generated from quadratic Lagrangians.

use gqd_core::json::{matrix_from_json, matrix_to_json, real_matrix_from_json, JsonMatrix, OperatorJson};
use gqd_core::linalg::hermitian_defect;
use gqd_core::sampling::random_hermitian_on_domain;
use gqd_core::tulczyjew::{
    discretized_laplacian_lagrangian, generate_dynamics, hamiltonian_relation, is_omega0_lagrangian,
    lagrangian_of,
};
use gqd_core::{
    c64, CMatrix, CVector, ComplexSubspace, Constraint, DynamicsReport, OperatorWithDomain,
    QuadraticLagrangian, RealSubspace, Subspace, Tolerance,
};
use rand::Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{CliError, Result};
use crate::report::Report;
use crate::scenario::Context;

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct LaplacianJson {
    pub grid_n: usize,
    #[serde(default = "one")]
    pub mass: f64,
}

fn one() -> f64 {
    1.0
}

/// A Lagrangian given by diagonal coefficients, an explicit `B` on a domain,
/// or a discretized Laplacian.
#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct LagrangianJson {
    pub n: Option<usize>,
    pub hbar: Option<f64>,
    /// `null` entries stand for `λ = ∞`.
    pub lambda: Option<Vec<Option<f64>>>,
    #[serde(default)]
    pub constraints: Vec<Constraint>,
    /// Orthonormal columns of `D₀ ⊆ R^{2n}`; defaults to all of `R^{2n}`.
    pub domain_frame: Option<Vec<Vec<f64>>>,
    /// `B` in the coordinates of the domain frame.
    #[serde(rename = "B")]
    pub b: Option<Vec<Vec<f64>>>,
    pub laplacian: Option<LaplacianJson>,
}

impl LagrangianJson {
    pub fn build(&self, hbar: f64, tol: &Tolerance) -> Result<QuadraticLagrangian> {
        let forms = [self.lambda.is_some(), self.b.is_some(), self.laplacian.is_some()];
        if forms.iter().filter(|&&f| f).count() != 1 {
            return Err(CliError::schema(
                "lagrangian needs exactly one of lambda, B or laplacian",
            ));
        }
        if let Some(lap) = &self.laplacian {
            return Ok(discretized_laplacian_lagrangian(lap.grid_n, lap.mass, hbar, tol)?);
        }
        if let Some(lambda) = &self.lambda {
            if self.n.is_some_and(|n| n != lambda.len()) {
                return Err(CliError::schema("n does not match the length of lambda"));
            }
            return Ok(QuadraticLagrangian::diagonal(lambda, &self.constraints, hbar, tol)?);
        }
        if !self.constraints.is_empty() {
            return Err(CliError::schema("constraints apply only to lambda Lagrangians"));
        }
        let n = self
            .n
            .ok_or_else(|| CliError::schema("explicit B needs n"))?;
        let domain = match &self.domain_frame {
            None => RealSubspace::full(2 * n),
            Some(cols) => {
                if cols.iter().any(|c| c.len() != 2 * n) {
                    return Err(CliError::schema("domain frame columns must have length 2n"));
                }
                let rows: Vec<Vec<f64>> = (0..2 * n).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
                let frame = real_matrix_from_json(&rows, Some(cols.len()))?;
                Subspace::from_orthonormal(frame, tol)?
            }
        };
        let b = real_matrix_from_json(self.b.as_ref().expect("checked"), Some(domain.dim()))?;
        Ok(QuadraticLagrangian::new(n, domain, b, hbar, tol)?)
    }
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct Expect {
    /// Ambient `n × n` matrix of the Schrödinger operator.
    matrix: Option<JsonMatrix>,
    domain_dim: Option<usize>,
    is_graph: Option<bool>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct GenParams {
    lagrangian: LagrangianJson,
    expect: Option<Expect>,
}

fn eigenvalues(a: &OperatorWithDomain, tol: &Tolerance) -> Result<Vec<f64>> {
    Ok(a.eigenvalues(tol)?)
}

pub fn gen_dynamics(ctx: &Context, params: &Value) -> Result<Report> {
    let p: GenParams = ctx.params(params)?;
    let hbar = ctx.hbar(p.lagrangian.hbar)?;
    let tol = &ctx.tol;
    let l = p.lagrangian.build(hbar, tol)?;
    let n = l.n();
    let d = generate_dynamics(&l, tol)?;
    let mut r = ctx.report();
    r.holds("dim S(L) = 2n", d.sl.dim() == 2 * n);
    r.holds("S(L) is Lagrangian for omega0", is_omega0_lagrangian(&d.sl, tol)?);
    r.put("n", n);
    r.put("hbar", hbar);
    r.put("complexLinear", d.complex_linear);
    r.put("lagrangianZeroPlus", d.lagrangian_zero_plus);
    r.put("isGraph", d.is_graph(tol));
    r.put("domainDim", d.domain(tol).dim());
    r.put("kernelOfInverseDim", d.kernel_of_inverse(tol).dim());
    if d.complex_linear {
        r.holds("V(L) is Lagrangian for zeroPlus", d.lagrangian_zero_plus);
    }
    let a = d.schroedinger.clone();
    if let Some(a) = &a {
        let m = a.ambient_matrix();
        r.le("hermitian defect of A", hermitian_defect(&m), 10.0 * tol.eq_tol);
        let h = hamiltonian_relation(a, hbar, tol)?;
        r.le("V(L) equals the Hamiltonian relation of A", h.distance(&d.vl), 10.0 * tol.eq_tol);
        r.put("eigenvalues", eigenvalues(a, tol)?);
        r.put("matrix", matrix_to_json(&m));
        r.put("schroedinger", OperatorJson::from_operator(a));
    }
    if let Some(e) = &p.expect {
        if let Some(expected) = &e.matrix {
            let expected = matrix_from_json(expected, Some(n))?;
            if expected.nrows() != n {
                return Err(CliError::schema("expected matrix must be n x n"));
            }
            let err = match &a {
                Some(a) => (a.ambient_matrix() - &expected).norm() / expected.norm().max(1.0),
                None => f64::INFINITY,
            };
            r.le("relative error of A against the expected matrix", err, 10.0 * tol.eq_tol);
        }
        if let Some(k) = e.domain_dim {
            r.holds(format!("domain has dimension {k}"), d.domain(tol).dim() == k);
        }
        if let Some(g) = e.is_graph {
            r.holds(format!("isGraph = {g}"), d.is_graph(tol) == g);
        }
    }
    Ok(r)
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RoundTripParams {
    #[serde(default = "default_sizes")]
    sizes: Vec<usize>,
    #[serde(default = "default_trials")]
    random_trials: usize,
    #[serde(default = "default_max_dim")]
    max_dim: usize,
    #[serde(default = "default_rel_tol")]
    rel_tol: f64,
    #[serde(default = "default_rel_tol")]
    projector_tol: f64,
    hbar: Option<f64>,
}

fn default_sizes() -> Vec<usize> {
    vec![3, 8, 32]
}

fn default_trials() -> usize {
    50
}

fn default_max_dim() -> usize {
    8
}

fn default_rel_tol() -> f64 {
    1e-9
}

/// The closed-form examples: `λ_k = k`, with `λ_1 = 0` (family 2) or
/// `λ_1 = ∞` (family 3) and the matching constraint on the first coordinate.
fn example_family(family: u8, n: usize, hbar: f64, tol: &Tolerance) -> Result<(QuadraticLagrangian, CMatrix, ComplexSubspace)> {
    let mut lambdas: Vec<Option<f64>> = (1..=n).map(|k| Some(k as f64)).collect();
    let constraints = match family {
        1 => vec![],
        2 => {
            lambdas[0] = Some(0.0);
            vec![Constraint::QdotZero(0)]
        }
        _ => {
            lambdas[0] = None;
            vec![Constraint::QZero(0)]
        }
    };
    let l = QuadraticLagrangian::diagonal(&lambdas, &constraints, hbar, tol)?;
    let diag = CVector::from_fn(n, |k, _| c64(hbar * lambdas[k].unwrap_or(0.0), 0.0));
    let domain = if family == 3 {
        ComplexSubspace::coordinate(n, &(1..n).collect::<Vec<_>>())?
    } else {
        ComplexSubspace::full(n)
    };
    Ok((l, CMatrix::from_diagonal(&diag), domain))
}

struct Recovery {
    matrix_error: f64,
    domain_error: f64,
    kernel_error: f64,
    is_graph: bool,
}

fn compare(d: &DynamicsReport, a: &CMatrix, domain: &ComplexSubspace, tol: &Tolerance) -> Recovery {
    let (matrix_error, domain_error) = match &d.schroedinger {
        Some(out) => (
            (out.ambient_matrix() - a).norm() / a.norm().max(f64::MIN_POSITIVE),
            (out.domain.projector() - domain.projector()).norm(),
        ),
        None => (f64::INFINITY, f64::INFINITY),
    };
    let kernel_error = (d.kernel_of_inverse(tol).projector() - domain.complement(tol).projector()).norm();
    Recovery {
        matrix_error,
        domain_error,
        kernel_error,
        is_graph: d.is_graph(tol),
    }
}

fn spectral_round_trip(a: &OperatorWithDomain, hbar: f64, tol: &Tolerance) -> Result<DynamicsReport> {
    Ok(lagrangian_of(a, hbar, tol)?.generate_dynamics(tol)?)
}

pub fn round_trip(ctx: &Context, params: &Value) -> Result<Report> {
    let p: RoundTripParams = ctx.params(params)?;
    if p.max_dim < 2 {
        return Err(CliError::schema("maxDim must be at least 2"));
    }
    let hbar = ctx.hbar(p.hbar)?;
    let tol = &ctx.tol;
    let mut r = ctx.report();
    let mut rows = Vec::new();
    for family in 1..=3u8 {
        for &n in &p.sizes {
            let (l, a, domain) = example_family(family, n, hbar, tol)?;
            let direct = compare(&generate_dynamics(&l, tol)?, &a, &domain, tol);
            let op = OperatorWithDomain::restrict(&a, domain.clone(), tol)?;
            let back = compare(&spectral_round_trip(&op, hbar, tol)?, &a, &domain, tol);
            let tag = format!("example {family}, n = {n}");
            for (how, rec) in [("generated", &direct), ("round trip", &back)] {
                r.le(format!("{tag}, {how}: relative error of A"), rec.matrix_error, p.rel_tol);
                r.le(format!("{tag}, {how}: domain projector error"), rec.domain_error, p.projector_tol);
                r.le(
                    format!("{tag}, {how}: kernelOfInverse = domain complement"),
                    rec.kernel_error,
                    p.projector_tol,
                );
                r.holds(format!("{tag}, {how}: graph iff the domain is full"), rec.is_graph == (family != 3));
            }
            rows.push(json!({
                "family": family,
                "n": n,
                "matrixError": direct.matrix_error.max(back.matrix_error),
                "domainError": direct.domain_error.max(back.domain_error),
                "kernelError": direct.kernel_error.max(back.kernel_error),
                "isGraph": direct.is_graph,
            }));
        }
    }
    r.put("examples", rows);

    let mut rng = ctx.rng();
    let (mut worst_a, mut worst_d, mut worst_k, mut worst_h) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..p.random_trials {
        let n = rng.random_range(2..=p.max_dim);
        let k = rng.random_range(1..=n);
        let a = random_hermitian_on_domain(&mut rng, n, k);
        let d = spectral_round_trip(&a, hbar, tol)?;
        let rec = compare(&d, &a.ambient_matrix(), &a.domain, tol);
        worst_a = worst_a.max(rec.matrix_error);
        worst_d = worst_d.max(rec.domain_error);
        worst_k = worst_k.max(rec.kernel_error);
        worst_h = worst_h.max(
            d.schroedinger
                .as_ref()
                .map_or(f64::INFINITY, |o| hermitian_defect(&o.ambient_matrix())),
        );
    }
    r.le("random instances: relative error of A", worst_a, p.rel_tol);
    r.le("random instances: domain projector error", worst_d, p.projector_tol);
    r.le("random instances: kernelOfInverse projector error", worst_k, p.projector_tol);
    r.le("random instances: hermitian defect", worst_h, 10.0 * tol.eq_tol);
    r.put("randomTrials", p.random_trials);
    Ok(r)
}
