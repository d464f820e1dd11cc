//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::diff::{diff_reports, DiffOptions};
use crate::error::{CliError, Result, EXIT_ASSERTION, EXIT_PASS, EXIT_SCHEMA};
use crate::scenario::{read_file, run_scenario, Kind, Overrides, Scenario, ToleranceOverrides};

#[derive(Parser)]
#[command(name = "gqd", version, about = "Geometric quantum dynamics scenario runner")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Relative rank tolerance.
    #[arg(long, global = true)]
    tol_rank: Option<f64>,
    /// Equality tolerance for residuals.
    #[arg(long, global = true)]
    tol_eq: Option<f64>,
    /// Eigenvalue clustering tolerance.
    #[arg(long, global = true)]
    tol_cluster: Option<f64>,
    #[arg(long, global = true)]
    hbar: Option<f64>,
    /// Overrides the scenario seed; GQD_SEED is used when neither is set.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Suppress the summary on stderr.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file.
    Run { scenario: PathBuf },
    /// Self-adjoint extensions of a symmetric relation read from a file.
    Extend {
        relation: PathBuf,
        /// Number of equally spaced angles in [0, 2π).
        #[arg(long, conflicts_with = "theta")]
        theta_grid: Option<usize>,
        /// Angle of U₀ = e^{iθ}; repeatable.
        #[arg(long)]
        theta: Vec<f64>,
    },
    /// Kähler identities on random tangent pairs.
    KahlerCheck {
        /// Fixed dimension; otherwise random up to 32.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Orbit embedding unitary between two density matrices.
    OrbitEmbed { rho: PathBuf, rho_prime: PathBuf },
    /// Random instances of the non-closedness witnesses.
    OrbitWitness {
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 64)]
        truncation: usize,
    },
    /// Schrödinger evolution; the file holds evolve params.
    Evolve { params: PathBuf },
    /// Schrödinger operator of a Lagrangian read from a file.
    GenDynamics { lagrangian: PathBuf },
    /// Compare two reports.
    Diff {
        a: PathBuf,
        b: PathBuf,
        /// Relative tolerance for numeric fields.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Flag `<=` checks of the second report above this value.
        #[arg(long)]
        check_tol: Option<f64>,
    },
}

fn read_json(path: &Path) -> Result<Value> {
    serde_json::from_str(&read_file(path)?).map_err(|e| CliError::schema(format!("{}: {e}", path.display())))
}

fn scenario(cmd: &Command) -> Result<Scenario> {
    Ok(match cmd {
        Command::Run { scenario } => Scenario::load(scenario)?,
        Command::Extend { relation, theta_grid, theta } => {
            let mut p = json!({ "relation": read_json(relation)? });
            match theta_grid {
                Some(k) => p["thetaGrid"] = json!(k),
                None if theta.is_empty() => return Err(CliError::schema("extend needs --theta-grid or --theta")),
                None => p["thetas"] = json!(theta),
            }
            Scenario::new(Kind::Extend, p)
        }
        Command::KahlerCheck { dim, samples } => {
            let mut p = json!({ "samples": samples });
            if let Some(n) = dim {
                p["dims"] = json!([n]);
            }
            Scenario::new(Kind::KahlerCheck, p)
        }
        Command::OrbitEmbed { rho, rho_prime } => Scenario::new(
            Kind::OrbitEmbed,
            json!({ "rho": read_json(rho)?, "rhoPrime": read_json(rho_prime)? }),
        ),
        Command::OrbitWitness { trials, truncation } => Scenario::new(
            Kind::OrbitWitness,
            json!({ "trials": trials, "truncation": truncation }),
        ),
        Command::Evolve { params } => Scenario::new(Kind::Evolve, read_json(params)?),
        Command::GenDynamics { lagrangian } => {
            Scenario::new(Kind::GenDynamics, json!({ "lagrangian": read_json(lagrangian)? }))
        }
        Command::Diff { .. } => unreachable!("diff produces no scenario"),
    })
}

fn emit(out: &Option<PathBuf>, stdout: &mut dyn Write, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn execute(cli: &Cli, env_seed: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let g = &cli.global;
    if let Command::Diff { a, b, tol, check_tol } = &cli.command {
        let d = diff_reports(&read_json(a)?, &read_json(b)?, &DiffOptions { tol: *tol, check_tol: *check_tol })?;
        emit(&g.out, stdout, &d.to_json())?;
        if !g.quiet {
            let _ = writeln!(stderr, "{} difference(s)", d.differences.len());
        }
        return Ok(if d.is_empty() { EXIT_PASS } else { EXIT_ASSERTION });
    }
    let overrides = Overrides {
        tolerances: ToleranceOverrides {
            rank_tol: g.tol_rank,
            eq_tol: g.tol_eq,
            eig_cluster_tol: g.tol_cluster,
        },
        hbar: g.hbar,
        seed: g.seed,
        fallback_seed: None,
    }
    .with_fallback_seed(env_seed)?;
    let report = run_scenario(&scenario(&cli.command)?, &overrides)?;
    emit(&g.out, stdout, &report.to_json())?;
    if !g.quiet {
        let _ = write!(stderr, "{}", report.summary());
    }
    Ok(if report.pass { EXIT_PASS } else { EXIT_ASSERTION })
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. The report goes to `stdout` only when the scenario ran to completion.
pub fn run<I, T>(args: I, env_seed: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_SCHEMA } else { EXIT_PASS };
        }
    };
    match execute(&cli, env_seed, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "gqd: {e}");
            e.exit_code()
        }
    }
}
