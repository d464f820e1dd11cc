//! Density matrices, spectral projections and unitary orbits.
//!
//! Two density matrices are on the same unitary orbit exactly when their
//! clustered spectra agree with multiplicities. Nearby orbit points are
//! joined by the explicit unitary `U = polar factor of Σ Q_i P_i`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c64, hermitian_defect, operator_norm, polar_decomposition, spectral_decomp_hermitian,
    trace_norm, CMatrix, CVector, Tolerance, C64,
};

/// Hermitian, positive semi-definite, unit trace.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    rho: CMatrix,
}

impl DensityMatrix {
    pub fn new(rho: CMatrix, tol: &Tolerance) -> Result<Self> {
        if !rho.is_square() || rho.nrows() == 0 {
            return Err(Error::InvalidDensity(format!(
                "density matrix must be square and nonempty, got {}x{}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        crate::linalg::ensure_finite(&rho)?;
        let defect = hermitian_defect(&rho);
        if defect > tol.eq_tol {
            return Err(Error::NotHermitian { defect });
        }
        let trace = rho.trace();
        if (trace - c64(1.0, 0.0)).norm() > tol.eq_tol {
            return Err(Error::InvalidDensity(format!("trace is {:.12}", trace.re)));
        }
        let eig = spectral_decomp_hermitian(&rho, tol)?;
        if let Some(&min) = eig.eigenvalues.first() {
            if min < -tol.eq_tol {
                return Err(Error::InvalidDensity(format!(
                    "negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(Self { rho })
    }

    /// `diag(p)` for a probability vector.
    pub fn diagonal(p: &[f64], tol: &Tolerance) -> Result<Self> {
        let d = CVector::from_iterator(p.len(), p.iter().map(|&x| c64(x, 0.0)));
        Self::new(CMatrix::from_diagonal(&d), tol)
    }

    /// `ρ_ψ`.
    pub fn pure(psi: &CVector, tol: &Tolerance) -> Result<Self> {
        let n2 = psi.norm_squared();
        if n2.sqrt() <= tol.rank_tol {
            return Err(Error::ZeroVector);
        }
        Self::new(psi * psi.adjoint() / c64(n2, 0.0), tol)
    }

    pub fn rho(&self) -> &CMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    /// `U ρ U^†`.
    pub fn conjugate(&self, u: &CMatrix) -> CMatrix {
        u * &self.rho * u.adjoint()
    }
}

/// `ρ = Σ λ_i P_i` with the eigenvalue-zero cluster always present.
#[derive(Clone, Debug)]
pub struct SpectralResolution {
    /// Descending; the last entry is the zero cluster.
    pub distinct_eigenvalues: Vec<f64>,
    pub projections: Vec<CMatrix>,
    pub multiplicities: Vec<usize>,
    /// Splits between clusters that lie within twice the clustering tolerance.
    pub warnings: Vec<String>,
}

impl SpectralResolution {
    pub fn len(&self) -> usize {
        self.distinct_eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distinct_eigenvalues.is_empty()
    }

    /// `Σ λ_i P_i`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.projections[0].nrows();
        self.distinct_eigenvalues
            .iter()
            .zip(&self.projections)
            .fold(CMatrix::zeros(n, n), |acc, (&l, p)| acc + p * c64(l, 0.0))
    }
}

/// Groups ascending values into clusters of consecutive gaps `≤ cluster_tol`.
/// Returns cluster index ranges and warnings for near-ambiguous splits.
fn cluster_ascending(values: &[f64], cluster_tol: f64) -> (Vec<(usize, usize)>, Vec<String>) {
    let mut clusters = Vec::new();
    let mut warnings = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() {
            if !values.is_empty() {
                clusters.push((start, i));
            }
            break;
        }
        let gap = values[i] - values[i - 1];
        if gap > cluster_tol {
            if gap <= 2.0 * cluster_tol {
                warnings.push(format!(
                    "eigenvalues {:.12e} and {:.12e} split with gap {gap:.3e} below twice the cluster tolerance",
                    values[i - 1],
                    values[i]
                ));
            }
            clusters.push((start, i));
            start = i;
        }
    }
    (clusters, warnings)
}

/// Clustered spectrum `(value, multiplicity)` in descending order, with a
/// trailing zero cluster (possibly of multiplicity 0).
pub fn clustered_spectrum(values: &[f64], cluster_tol: f64) -> Vec<(f64, usize)> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let (clusters, _) = cluster_ascending(&v, cluster_tol);
    let mut out: Vec<(f64, usize)> = clusters
        .iter()
        .map(|&(a, b)| (v[a..b].iter().sum::<f64>() / (b - a) as f64, b - a))
        .collect();
    out.reverse();
    match out.last() {
        Some(&(l, _)) if l.abs() <= cluster_tol => {
            let last = out.len() - 1;
            out[last].0 = 0.0;
        }
        _ => out.push((0.0, 0)),
    }
    out
}

/// Equality of clustered spectra, including multiplicities and the zero cluster.
pub fn spectra_equivalent(a: &[f64], b: &[f64], cluster_tol: f64) -> bool {
    let sa = clustered_spectrum(a, cluster_tol);
    let sb = clustered_spectrum(b, cluster_tol);
    sa.len() == sb.len()
        && sa
            .iter()
            .zip(&sb)
            .all(|(x, y)| x.1 == y.1 && (x.0 - y.0).abs() <= cluster_tol)
}

pub fn spectral_projections(rho: &DensityMatrix, tol: &Tolerance) -> Result<SpectralResolution> {
    let n = rho.dim();
    let eig = spectral_decomp_hermitian(rho.rho(), tol)?;
    let (clusters, warnings) = cluster_ascending(&eig.eigenvalues, tol.eig_cluster_tol);
    let mut distinct = Vec::new();
    let mut projections = Vec::new();
    let mut multiplicities = Vec::new();
    for &(a, b) in clusters.iter().rev() {
        let value = eig.eigenvalues[a..b].iter().sum::<f64>() / (b - a) as f64;
        let v = eig.eigenvectors.columns(a, b - a);
        projections.push(v * v.adjoint());
        distinct.push(value);
        multiplicities.push(b - a);
    }
    match distinct.last() {
        Some(&l) if l.abs() <= tol.eig_cluster_tol => {
            let last = distinct.len() - 1;
            distinct[last] = 0.0;
        }
        _ => {
            distinct.push(0.0);
            projections.push(CMatrix::zeros(n, n));
            multiplicities.push(0);
        }
    }
    Ok(SpectralResolution {
        distinct_eigenvalues: distinct,
        projections,
        multiplicities,
        warnings,
    })
}

fn eigenvalues(rho: &DensityMatrix, tol: &Tolerance) -> Result<Vec<f64>> {
    Ok(spectral_decomp_hermitian(rho.rho(), tol)?.eigenvalues)
}

pub fn orbit_equivalent(a: &DensityMatrix, b: &DensityMatrix, tol: &Tolerance) -> Result<bool> {
    if a.dim() != b.dim() {
        return Ok(false);
    }
    Ok(spectra_equivalent(
        &eigenvalues(a, tol)?,
        &eigenvalues(b, tol)?,
        tol.eig_cluster_tol,
    ))
}

/// The unitary of the local orbit embedding with its verification data.
#[derive(Clone, Debug)]
pub struct OrbitEmbedding {
    pub u: CMatrix,
    /// `Σ_i ‖P_i − Q_i‖_∞`.
    pub proximity: f64,
    /// Smallest eigenvalue of `X^† X`.
    pub x_gram_min: f64,
    /// `max_i ‖U P_i − Q_i U‖`.
    pub intertwining_residual: f64,
    /// `‖U ρ U^† − ρ'‖_1`.
    pub conjugation_residual: f64,
    pub unitarity_defect: f64,
}

/// Projector distances `‖P_i − Q_i‖_∞` after checking both spectra agree.
fn paired_resolutions(
    rho: &DensityMatrix,
    rho_p: &DensityMatrix,
    tol: &Tolerance,
) -> Result<(SpectralResolution, SpectralResolution)> {
    if rho.dim() != rho_p.dim() || !orbit_equivalent(rho, rho_p, tol)? {
        return Err(Error::OrbitMismatch);
    }
    let p = spectral_projections(rho, tol)?;
    let q = spectral_projections(rho_p, tol)?;
    if p.multiplicities != q.multiplicities {
        return Err(Error::OrbitMismatch);
    }
    Ok((p, q))
}

/// `Σ_i ‖P_i − Q_i‖_∞` for orbit-equivalent states.
pub fn proximity(rho: &DensityMatrix, rho_p: &DensityMatrix, tol: &Tolerance) -> Result<f64> {
    let (p, q) = paired_resolutions(rho, rho_p, tol)?;
    Ok(p.projections
        .iter()
        .zip(&q.projections)
        .map(|(a, b)| operator_norm(&(a - b)))
        .sum())
}

/// `U` with `U P_i = Q_i U`, from the polar decomposition of `X = Σ Q_i P_i`.
pub fn embed_orbit(rho: &DensityMatrix, rho_p: &DensityMatrix, tol: &Tolerance) -> Result<OrbitEmbedding> {
    let (p, q) = paired_resolutions(rho, rho_p, tol)?;
    let sum: f64 = p
        .projections
        .iter()
        .zip(&q.projections)
        .map(|(a, b)| operator_norm(&(a - b)))
        .sum();
    if sum > 0.5 {
        return Err(Error::ProximityViolated { sum });
    }
    let n = rho.dim();
    let x = p
        .projections
        .iter()
        .zip(&q.projections)
        .fold(CMatrix::zeros(n, n), |acc, (pi, qi)| acc + qi * pi);
    let gram = x.adjoint() * &x;
    let x_gram_min = spectral_decomp_hermitian(&((&gram + gram.adjoint()) * c64(0.5, 0.0)), tol)?
        .eigenvalues[0];
    let polar = polar_decomposition(&x, tol)?;
    let u = polar.unitary;
    let intertwining_residual = p
        .projections
        .iter()
        .zip(&q.projections)
        .map(|(pi, qi)| (&u * pi - qi * &u).norm())
        .fold(0.0, f64::max);
    let conjugation_residual = trace_norm(&(rho.conjugate(&u) - rho_p.rho()));
    Ok(OrbitEmbedding {
        unitarity_defect: crate::linalg::unitarity_defect(&u),
        u,
        proximity: sum,
        x_gram_min,
        intertwining_residual,
        conjugation_residual,
    })
}

/// Unitary `V` sending each eigenvector of `ρ` to a greedily matched
/// eigenvector of `ρ'` from the same cluster.
///
/// Used as a coarse pre-alignment when the proximity condition fails.
pub fn coarse_alignment(rho: &DensityMatrix, rho_p: &DensityMatrix, tol: &Tolerance) -> Result<CMatrix> {
    if rho.dim() != rho_p.dim() || !orbit_equivalent(rho, rho_p, tol)? {
        return Err(Error::OrbitMismatch);
    }
    let n = rho.dim();
    let a = spectral_decomp_hermitian(rho.rho(), tol)?;
    let b = spectral_decomp_hermitian(rho_p.rho(), tol)?;
    let mut used = vec![false; n];
    let mut v = CMatrix::zeros(n, n);
    for j in 0..n {
        let lj = a.eigenvalues[j];
        let aj = a.eigenvectors.column(j);
        let mut best: Option<(usize, f64)> = None;
        for k in 0..n {
            if used[k] || (b.eigenvalues[k] - lj).abs() > tol.eig_cluster_tol * (n as f64) {
                continue;
            }
            let ov = b.eigenvectors.column(k).dotc(&aj).norm();
            if best.is_none_or(|(_, o)| ov > o) {
                best = Some((k, ov));
            }
        }
        let (k, _) = best.ok_or(Error::OrbitMismatch)?;
        used[k] = true;
        let bk = b.eigenvectors.column(k);
        // Keep the phase that maximizes overlap so V stays close to I when possible.
        let ov: C64 = bk.dotc(&aj);
        let phase = if ov.norm() > 0.0 { ov / c64(ov.norm(), 0.0) } else { c64(1.0, 0.0) };
        v += (bk * phase) * aj.adjoint();
    }
    Ok(v)
}

/// [`embed_orbit`] after conjugating `ρ` by [`coarse_alignment`].
pub fn embed_orbit_aligned(
    rho: &DensityMatrix,
    rho_p: &DensityMatrix,
    tol: &Tolerance,
) -> Result<OrbitEmbedding> {
    match embed_orbit(rho, rho_p, tol) {
        Err(Error::ProximityViolated { .. }) => {
            let v = coarse_alignment(rho, rho_p, tol)?;
            let aligned = DensityMatrix::new(rho.conjugate(&v), tol)?;
            let mut e = embed_orbit(&aligned, rho_p, tol)?;
            e.u = &e.u * v;
            e.conjugation_residual = trace_norm(&(rho.conjugate(&e.u) - rho_p.rho()));
            e.unitarity_defect = crate::linalg::unitarity_defect(&e.u);
            Ok(e)
        }
        other => other,
    }
}

/// `{f, g}(A) = tr(A [F, G])` for the linear functionals `f = tr(· F)`, `g = tr(· G)`.
pub fn kks_bracket(f: &CMatrix, g: &CMatrix, a: &CMatrix) -> Result<C64> {
    let n = a.nrows();
    for (name, m) in [("F", f), ("G", g), ("A", a)] {
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{name} is {}x{}, expected {n}x{n}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    Ok((a * (f * g - g * f)).trace())
}

/// Which construction of the non-closedness argument to instantiate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "case")]
pub enum WitnessCase {
    /// Zero is not an eigenvalue.
    #[serde(rename = "1")]
    NoKernel,
    /// Zero has finite multiplicity `m`.
    #[serde(rename = "2")]
    FiniteKernel { m: usize },
    /// Zero has (truncated) infinite multiplicity; `N` must be even.
    #[serde(rename = "3")]
    InfiniteKernel,
}

impl WitnessCase {
    pub fn number(self) -> u8 {
        match self {
            WitnessCase::NoKernel => 1,
            WitnessCase::FiniteKernel { .. } => 2,
            WitnessCase::InfiniteKernel => 3,
        }
    }

    pub fn factor(self) -> f64 {
        f64::from(self.number() + 1)
    }
}

/// Diagonal instance of the non-closedness argument at truncation `N`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessReport {
    pub case: u8,
    pub truncation: usize,
    pub index: usize,
    pub rho: Vec<f64>,
    pub rho_n: Vec<f64>,
    pub rho_prime: Vec<f64>,
    /// `‖ρ_n − ρ'‖_1`.
    pub lhs: f64,
    /// Factor times the truncated tail sum.
    pub rhs: f64,
    pub holds: bool,
    pub rho_n_on_orbit: bool,
    pub rho_prime_on_orbit: bool,
    pub zero_multiplicity_rho_n: usize,
    pub zero_multiplicity_rho_prime: usize,
    /// Predicted `zeroMult(ρ') − zeroMult(ρ_n)`.
    pub predicted_zero_defect: i64,
    pub spectrum_tolerance: f64,
}

impl WitnessReport {
    pub fn zero_defect(&self) -> i64 {
        self.zero_multiplicity_rho_prime as i64 - self.zero_multiplicity_rho_n as i64
    }

    /// All claims of the construction hold.
    pub fn passes(&self) -> bool {
        self.holds
            && self.rho_n_on_orbit
            && !self.rho_prime_on_orbit
            && self.zero_defect() == self.predicted_zero_defect
    }
}

/// Checks that `a` is a usable sequence of at least `len` positive finite terms.
fn validate_sequence(a: &[f64], len: usize) -> Result<()> {
    if a.len() < len {
        return Err(Error::MalformedSequence(format!(
            "need at least {len} terms, got {}",
            a.len()
        )));
    }
    if let Some((i, x)) = a[..len].iter().enumerate().find(|(_, x)| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::MalformedSequence(format!(
            "term {} is {x}; all terms must be positive and finite",
            i + 1
        )));
    }
    Ok(())
}

/// Resolution at which the diagonal spectra are compared: a quarter of the
/// smallest positive value or positive gap.
fn spectrum_resolution(parts: &[&[f64]]) -> f64 {
    let mut v: Vec<f64> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    let mut res = f64::INFINITY;
    for w in v.windows(2) {
        res = res.min(w[1] - w[0]);
    }
    if let Some(&smallest) = v.iter().find(|&&x| x > 0.0) {
        res = res.min(smallest);
    }
    if res.is_finite() { res / 4.0 } else { 0.25 }
}

/// Builds `ρ`, `ρ_n` and `ρ'` of the chosen case from the terms `a_1, a_2, …`
/// (`a[0]` is `a_1`) at truncation `N` and index `n`, and checks the bound.
pub fn closedness_witness(
    case: WitnessCase,
    a: &[f64],
    truncation: usize,
    index: usize,
    tol: &Tolerance,
) -> Result<WitnessReport> {
    let big_n = truncation;
    let n = index;
    if n == 0 || 2 * n >= big_n {
        return Err(Error::MalformedSequence(format!(
            "index must satisfy 1 <= n < N/2, got n = {n}, N = {big_n}"
        )));
    }
    validate_sequence(a, big_n)?;
    let at = |k: usize| a[k - 1];
    let (rho, rho_n, rho_prime, tail_from, tail_to) = match case {
        WitnessCase::NoKernel => {
            let rho: Vec<f64> = (1..=big_n).map(at).collect();
            let mut rho_n = vec![at(n + 1)];
            rho_n.extend((1..=n).map(at));
            rho_n.extend((n + 2..=big_n).map(at));
            let mut rho_prime = vec![0.0];
            rho_prime.extend((1..big_n).map(at));
            (rho, rho_n, rho_prime, n + 1, big_n)
        }
        WitnessCase::FiniteKernel { m } => {
            if m == 0 || m >= big_n - n {
                return Err(Error::MalformedSequence(format!(
                    "kernel multiplicity must satisfy 1 <= m < N - n, got m = {m}"
                )));
            }
            let mut rho = vec![0.0; m];
            rho.extend((1..=big_n - m).map(at));
            let mut rho_n: Vec<f64> = (1..=n).map(at).collect();
            rho_n.extend(std::iter::repeat_n(0.0, m));
            rho_n.extend((n + 1..=big_n - m).map(at));
            let rho_prime: Vec<f64> = (1..=big_n).map(at).collect();
            (rho, rho_n, rho_prime, n + 1, big_n)
        }
        WitnessCase::InfiniteKernel => {
            if !big_n.is_multiple_of(2) {
                return Err(Error::MalformedSequence(format!(
                    "case 3 needs an even truncation, got N = {big_n}"
                )));
            }
            let half = big_n / 2;
            if 2 * n - 2 > half {
                return Err(Error::MalformedSequence(format!(
                    "case 3 at N = {big_n} needs 2n - 2 <= N/2, got n = {n}"
                )));
            }
            // Layout: f_1..f_M then e_1..e_M.
            let mut rho = vec![0.0; half];
            rho.extend((1..=half).map(at));
            let mut rho_n = Vec::with_capacity(big_n);
            for i in 1..=half {
                rho_n.push(if i < n { at(2 * i) } else { 0.0 });
            }
            for i in 1..=half {
                rho_n.push(if i < n {
                    at(2 * i - 1)
                } else if i <= 2 * n - 2 {
                    0.0
                } else {
                    at(i)
                });
            }
            let mut rho_prime: Vec<f64> = (1..=half).map(|i| at(2 * i)).collect();
            rho_prime.extend((1..=half).map(|i| at(2 * i - 1)));
            (rho, rho_n, rho_prime, n, big_n)
        }
    };
    let lhs: f64 = rho_n.iter().zip(&rho_prime).map(|(x, y)| (x - y).abs()).sum();
    let tail: f64 = (tail_from..=tail_to).map(at).sum();
    let rhs = case.factor() * tail;
    let res = spectrum_resolution(&[&rho, &rho_n, &rho_prime]);
    let zero_mult = |v: &[f64]| v.iter().filter(|&&x| x.abs() <= res).count();
    let predicted_zero_defect = match case {
        WitnessCase::NoKernel => 1,
        WitnessCase::FiniteKernel { m } => -(m as i64),
        WitnessCase::InfiniteKernel => -((big_n / 2) as i64),
    };
    Ok(WitnessReport {
        case: case.number(),
        truncation: big_n,
        index: n,
        holds: lhs <= rhs + tol.eq_tol,
        rho_n_on_orbit: spectra_equivalent(&rho_n, &rho, res),
        rho_prime_on_orbit: spectra_equivalent(&rho_prime, &rho, res),
        zero_multiplicity_rho_n: zero_mult(&rho_n),
        zero_multiplicity_rho_prime: zero_mult(&rho_prime),
        predicted_zero_defect,
        spectrum_tolerance: res,
        lhs,
        rhs,
        rho,
        rho_n,
        rho_prime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn cdiag(d: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_iterator(d.len(), d.iter().map(|&x| c64(x, 0.0))))
    }

    fn rotation(theta: f64) -> CMatrix {
        let (s, c) = theta.sin_cos();
        CMatrix::from_row_slice(2, 2, &[c64(c, 0.0), c64(-s, 0.0), c64(s, 0.0), c64(c, 0.0)])
    }

    #[test]
    fn degenerate_spectrum_resolution() {
        let rho = DensityMatrix::diagonal(&[0.5, 0.5, 0.0], &tol()).unwrap();
        let r = spectral_projections(&rho, &tol()).unwrap();
        assert_eq!(r.distinct_eigenvalues, vec![0.5, 0.0]);
        assert!((&r.projections[0] - cdiag(&[1.0, 1.0, 0.0])).norm() < 1e-14);
        assert!((&r.projections[1] - cdiag(&[0.0, 0.0, 1.0])).norm() < 1e-14);
        assert!((r.reconstruct() - rho.rho()).norm() < 1e-14);
    }

    #[test]
    fn pure_state_clusters() {
        let psi = CVector::from_vec(vec![c64(1.0, 0.0), c64(0.0, 1.0), c64(1.0, 1.0)]);
        let r = spectral_projections(&DensityMatrix::pure(&psi, &tol()).unwrap(), &tol()).unwrap();
        assert_eq!(r.multiplicities, vec![1, 2]);
        assert_relative_eq!(r.distinct_eigenvalues[0], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn near_degenerate_pair_merges() {
        let rho = DensityMatrix::diagonal(&[0.3, 0.3 + 1e-12, 0.4 - 1e-12], &tol()).unwrap();
        let r = spectral_projections(&rho, &tol()).unwrap();
        assert_eq!(r.multiplicities, vec![1, 2, 0]);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn full_rank_state_gets_empty_zero_cluster() {
        let rho = DensityMatrix::diagonal(&[0.7, 0.3], &tol()).unwrap();
        let r = spectral_projections(&rho, &tol()).unwrap();
        assert_eq!(r.distinct_eigenvalues, vec![0.7, 0.3, 0.0]);
        assert_eq!(r.projections[2].norm(), 0.0);
    }

    #[test]
    fn ambiguous_split_warns() {
        let rho = DensityMatrix::diagonal(&[0.25, 0.25 + 1.5e-8, 0.5 - 1.5e-8], &tol()).unwrap();
        let r = spectral_projections(&rho, &tol()).unwrap();
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn orbit_equivalence_examples() {
        let a = DensityMatrix::diagonal(&[1.0, 0.0], &tol()).unwrap();
        let b = DensityMatrix::diagonal(&[0.9, 0.1], &tol()).unwrap();
        assert!(!orbit_equivalent(&a, &b, &tol()).unwrap());
        let c = DensityMatrix::diagonal(&[0.5, 0.5, 0.0], &tol()).unwrap();
        let d = DensityMatrix::diagonal(&[0.5, 0.25, 0.25], &tol()).unwrap();
        assert!(!orbit_equivalent(&c, &d, &tol()).unwrap());
        let r = rotation(0.4);
        let rb = DensityMatrix::new(b.conjugate(&r), &tol()).unwrap();
        assert!(orbit_equivalent(&b, &rb, &tol()).unwrap());
    }

    #[test]
    fn embedding_of_identical_states_is_identity() {
        let rho = DensityMatrix::diagonal(&[0.6, 0.3, 0.1], &tol()).unwrap();
        let e = embed_orbit(&rho, &rho, &tol()).unwrap();
        assert!((&e.u - CMatrix::identity(3, 3)).norm() < 1e-14);
        assert_relative_eq!(e.x_gram_min, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn embedding_of_small_rotation() {
        let rho = DensityMatrix::diagonal(&[0.7, 0.3], &tol()).unwrap();
        let rp = DensityMatrix::new(rho.conjugate(&rotation(0.1)), &tol()).unwrap();
        let e = embed_orbit(&rho, &rp, &tol()).unwrap();
        assert!(e.conjugation_residual <= 1e-8);
        assert!(e.intertwining_residual <= 1e-12);
        assert!(e.x_gram_min >= 0.5);
    }

    #[test]
    fn embedding_far_apart_violates_proximity() {
        let rho = DensityMatrix::diagonal(&[0.7, 0.3], &tol()).unwrap();
        let rp = DensityMatrix::new(rho.conjugate(&rotation(std::f64::consts::FRAC_PI_2)), &tol()).unwrap();
        assert!(matches!(
            embed_orbit(&rho, &rp, &tol()),
            Err(Error::ProximityViolated { .. })
        ));
        let e = embed_orbit_aligned(&rho, &rp, &tol()).unwrap();
        assert!(e.conjugation_residual <= 1e-12);
    }

    #[test]
    fn embedding_rejects_other_orbits() {
        let a = DensityMatrix::diagonal(&[0.7, 0.3], &tol()).unwrap();
        let b = DensityMatrix::diagonal(&[0.6, 0.4], &tol()).unwrap();
        assert!(matches!(embed_orbit(&a, &b, &tol()), Err(Error::OrbitMismatch)));
    }

    #[test]
    fn invalid_densities_are_rejected() {
        assert!(DensityMatrix::diagonal(&[0.5, 0.4], &tol()).is_err());
        assert!(DensityMatrix::diagonal(&[1.5, -0.5], &tol()).is_err());
    }

    #[test]
    fn kks_examples() {
        let mut e12 = CMatrix::zeros(2, 2);
        e12[(0, 1)] = c64(1.0, 0.0);
        let e21 = e12.transpose();
        let a = cdiag(&[1.0, 0.0]);
        assert_eq!(kks_bracket(&e12, &e21, &a).unwrap(), c64(1.0, 0.0));
        assert_eq!(kks_bracket(&e12, &e12, &a).unwrap(), c64(0.0, 0.0));
        assert_eq!(kks_bracket(&e12, &e21, &CMatrix::identity(2, 2)).unwrap(), c64(0.0, 0.0));
        assert!(kks_bracket(&e12, &CMatrix::zeros(3, 3), &a).is_err());
    }

    fn geometric(len: usize) -> Vec<f64> {
        (1..=len).map(|k| 0.5f64.powi(k as i32)).collect()
    }

    #[test]
    fn witness_case_one() {
        let r = closedness_witness(WitnessCase::NoKernel, &geometric(12), 12, 4, &tol()).unwrap();
        assert!(r.passes(), "{r:?}");
        assert_eq!(r.zero_multiplicity_rho_n, 0);
        assert_eq!(r.zero_multiplicity_rho_prime, 1);
    }

    #[test]
    fn witness_case_two() {
        let r = closedness_witness(WitnessCase::FiniteKernel { m: 2 }, &geometric(12), 12, 4, &tol()).unwrap();
        assert!(r.passes(), "{r:?}");
        assert_relative_eq!(r.rhs, 3.0 * (5..=12).map(|k| 0.5f64.powi(k)).sum::<f64>());
    }

    #[test]
    fn witness_case_three() {
        let r = closedness_witness(WitnessCase::InfiniteKernel, &geometric(16), 16, 3, &tol()).unwrap();
        assert!(r.passes(), "{r:?}");
        assert_eq!(r.zero_multiplicity_rho_n, 8);
        assert_eq!(r.zero_multiplicity_rho_prime, 0);
    }

    #[test]
    fn witness_rejects_malformed_input() {
        let a = geometric(12);
        assert!(closedness_witness(WitnessCase::NoKernel, &a, 12, 6, &tol()).is_err());
        assert!(closedness_witness(WitnessCase::NoKernel, &a[..8], 12, 2, &tol()).is_err());
        let mut bad = a.clone();
        bad[3] = -1.0;
        assert!(matches!(
            closedness_witness(WitnessCase::NoKernel, &bad, 12, 2, &tol()),
            Err(Error::MalformedSequence(_))
        ));
        assert!(closedness_witness(WitnessCase::InfiniteKernel, &a, 11, 2, &tol()).is_err());
    }
}
