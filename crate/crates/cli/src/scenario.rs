//! Scenario files, run settings and dispatch to the per-kind runners.

use std::path::Path;

use gqd_core::Tolerance;
use rand::rngs::StdRng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, Result};
use crate::kinds;
use crate::report::Report;

/// Environment variable consulted when neither the command line nor the
/// scenario file sets a seed.
pub const SEED_ENV: &str = "GQD_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Kind {
    GenDynamics,
    Extend,
    OrbitEmbed,
    OrbitWitness,
    KahlerCheck,
    Evolve,
    DualityCheck,
    ConvexHull,
    RoundTrip,
    FormTransfer,
    Deficiency,
    CriticalPoints,
    DynamicsCheck,
    SchattenMonotonicity,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::GenDynamics => "genDynamics",
            Kind::Extend => "extend",
            Kind::OrbitEmbed => "orbitEmbed",
            Kind::OrbitWitness => "orbitWitness",
            Kind::KahlerCheck => "kahlerCheck",
            Kind::Evolve => "evolve",
            Kind::DualityCheck => "dualityCheck",
            Kind::ConvexHull => "convexHull",
            Kind::RoundTrip => "roundTrip",
            Kind::FormTransfer => "formTransfer",
            Kind::Deficiency => "deficiency",
            Kind::CriticalPoints => "criticalPoints",
            Kind::DynamicsCheck => "dynamicsCheck",
            Kind::SchattenMonotonicity => "schattenMonotonicity",
        }
    }
}

/// Partial tolerance settings; unset fields keep their defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub rank_tol: Option<f64>,
    pub eq_tol: Option<f64>,
    pub eig_cluster_tol: Option<f64>,
}

impl ToleranceOverrides {
    fn apply(&self, mut tol: Tolerance) -> Tolerance {
        if let Some(v) = self.rank_tol {
            tol.rank_tol = v;
        }
        if let Some(v) = self.eq_tol {
            tol.eq_tol = v;
        }
        if let Some(v) = self.eig_cluster_tol {
            tol.eig_cluster_tol = v;
        }
        tol
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Scenario {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceOverrides>,
    #[serde(default)]
    pub params: Value,
}

impl Scenario {
    pub fn new(kind: Kind, params: Value) -> Self {
        Self {
            kind,
            seed: None,
            tolerances: None,
            params,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::schema(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&read_file(path)?)
    }
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Command-line settings that take precedence over the scenario file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub tolerances: ToleranceOverrides,
    pub hbar: Option<f64>,
    pub seed: Option<u64>,
    /// Seed used when neither the command line nor the file sets one.
    pub fallback_seed: Option<u64>,
}

impl Overrides {
    /// Reads the fallback seed from [`SEED_ENV`].
    pub fn with_env_seed(self) -> Result<Self> {
        self.with_fallback_seed(std::env::var(SEED_ENV).ok().as_deref())
    }

    /// Parses `value` as the fallback seed.
    pub fn with_fallback_seed(mut self, value: Option<&str>) -> Result<Self> {
        if let Some(s) = value {
            let seed = s
                .trim()
                .parse()
                .map_err(|_| CliError::schema(format!("{SEED_ENV}={s:?} is not an unsigned integer")))?;
            self.fallback_seed = Some(seed);
        }
        Ok(self)
    }
}

/// Resolved settings handed to a runner.
pub struct Context {
    pub kind: Kind,
    pub seed: u64,
    pub tol: Tolerance,
    hbar_override: Option<f64>,
}

impl Context {
    pub fn rng(&self) -> StdRng {
        gqd_core::sampling::seeded_rng(self.seed)
    }

    /// `--hbar` if given, else the scenario value, else 1.
    pub fn hbar(&self, from_params: Option<f64>) -> Result<f64> {
        let h = self.hbar_override.or(from_params).unwrap_or(1.0);
        if h.is_finite() && h > 0.0 {
            Ok(h)
        } else {
            Err(CliError::schema(format!("hbar must be positive, got {h}")))
        }
    }

    pub fn report(&self) -> Report {
        Report::new(self.kind, self.seed, self.tol)
    }

    pub fn params<P: DeserializeOwned>(&self, v: &Value) -> Result<P> {
        let v = if v.is_null() { Value::Object(Default::default()) } else { v.clone() };
        serde_json::from_value(v)
            .map_err(|e| CliError::schema(format!("{} params: {e}", self.kind.name())))
    }
}

pub fn context(s: &Scenario, o: &Overrides) -> Result<Context> {
    let tol = s.tolerances.unwrap_or_default().apply(Tolerance::default());
    let tol = o.tolerances.apply(tol);
    tol.validate()
        .map_err(|e| CliError::schema(e.to_string()))?;
    Ok(Context {
        kind: s.kind,
        seed: o.seed.or(s.seed).or(o.fallback_seed).unwrap_or(0),
        tol,
        hbar_override: o.hbar,
    })
}

pub fn run_scenario(s: &Scenario, o: &Overrides) -> Result<Report> {
    let ctx = context(s, o)?;
    let p = &s.params;
    match s.kind {
        Kind::GenDynamics => kinds::generation::gen_dynamics(&ctx, p),
        Kind::RoundTrip => kinds::generation::round_trip(&ctx, p),
        Kind::Extend => kinds::extension::extend(&ctx, p),
        Kind::FormTransfer => kinds::extension::form_transfer(&ctx, p),
        Kind::Deficiency => kinds::extension::deficiency(&ctx, p),
        Kind::OrbitEmbed => kinds::orbit::orbit_embed(&ctx, p),
        Kind::OrbitWitness => kinds::orbit::orbit_witness(&ctx, p),
        Kind::KahlerCheck => kinds::geometry::kahler_check(&ctx, p),
        Kind::CriticalPoints => kinds::geometry::critical_points(&ctx, p),
        Kind::Evolve => kinds::dynamics::evolve(&ctx, p),
        Kind::DualityCheck => kinds::dynamics::duality_check(&ctx, p),
        Kind::DynamicsCheck => kinds::dynamics::dynamics_check(&ctx, p),
        Kind::ConvexHull => kinds::norms::convex_hull(&ctx, p),
        Kind::SchattenMonotonicity => kinds::norms::schatten_monotonicity(&ctx, p),
    }
}

pub fn run_scenario_file(path: &Path, o: &Overrides) -> Result<Report> {
    run_scenario(&Scenario::load(path)?, o)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_scenario() {
        let s = Scenario::from_json(r#"{"kind": "convexHull"}"#).unwrap();
        assert_eq!(s.kind, Kind::ConvexHull);
        assert!(s.params.is_null());
    }

    #[test]
    fn rejects_unknown_fields_and_kinds() {
        assert!(Scenario::from_json(r#"{"kind": "convexHull", "extra": 1}"#).is_err());
        assert!(Scenario::from_json(r#"{"kind": "nope"}"#).is_err());
        assert!(Scenario::from_json("{").is_err());
    }

    #[test]
    fn precedence_of_settings() {
        let s = Scenario::from_json(
            r#"{"kind": "convexHull", "seed": 5, "tolerances": {"eqTol": 1e-7}}"#,
        )
        .unwrap();
        let ctx = context(&s, &Overrides::default()).unwrap();
        assert_eq!(ctx.seed, 5);
        assert_eq!(ctx.tol.eq_tol, 1e-7);
        let o = Overrides {
            tolerances: ToleranceOverrides { eq_tol: Some(1e-6), ..Default::default() },
            seed: Some(9),
            fallback_seed: Some(11),
            hbar: Some(0.5),
        };
        let ctx = context(&s, &o).unwrap();
        assert_eq!((ctx.seed, ctx.tol.eq_tol), (9, 1e-6));
        assert_eq!(ctx.hbar(Some(2.0)).unwrap(), 0.5);
        let bare = Scenario::new(Kind::ConvexHull, Value::Null);
        let o = Overrides { fallback_seed: Some(11), ..Default::default() };
        assert_eq!(context(&bare, &o).unwrap().seed, 11);
    }

    #[test]
    fn invalid_tolerance_is_a_schema_error() {
        let s = Scenario::from_json(r#"{"kind": "convexHull", "tolerances": {"rankTol": -1}}"#).unwrap();
        assert!(matches!(context(&s, &Overrides::default()), Err(CliError::Schema(_))));
    }
}
