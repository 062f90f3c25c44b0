//! `mlsurf`: sample, verify and normalize translationally equivariant minimal Lagrangian surfaces.

mod compute;
mod config;
mod error;
mod output;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mlsurf_core::immersion::{clifford_closing, normalize_vacuum};
use mlsurf_core::unit_lambda;
use num_complex::Complex64;
use serde::Serialize;

use crate::config::{parse_tol, ConfigFile, Grid, Overrides, RunConfig};
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "mlsurf", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the lift on a grid and write CSV plus a JSON report.
    Compute(RunArgs),
    /// Run every verification suite; exit 1 if any fails.
    Verify(RunArgs),
    /// Solve the Clifford torus closing conditions for one lattice vector.
    CliffordClosing(ClosingArgs),
    /// Normalize a vacuum potential to the Clifford potential.
    Vacuum(VacuumArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    a1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    psi_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    psi_im: Option<f64>,
    /// Spectral angle, λ = e^{iθ}; repeatable, defaults to 0.
    #[arg(long, allow_hyphen_values = true)]
    theta: Vec<f64>,
    /// "x0,x1,y0,y1,nx,ny"
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<Grid>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
    /// Tolerance override NAME=VALUE; repeatable.
    #[arg(long = "tol", value_parser = parse_tol)]
    tol: Vec<(String, f64)>,
    #[arg(long, env = "MLSURF_THREADS")]
    threads: Option<usize>,
}

impl RunArgs {
    fn resolve(self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let flags = Overrides {
            a1: self.a1,
            psi_re: self.psi_re,
            psi_im: self.psi_im,
            theta: self.theta,
            grid: self.grid,
            tolerances: self.tol,
            csv: self.csv,
            report: self.report,
            threads: self.threads,
        };
        RunConfig::resolve(file, flags)
    }
}

#[derive(Args)]
struct ClosingArgs {
    /// λ₀ = e^{iθ}.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long, allow_hyphen_values = true)]
    l1: i64,
    #[arg(long, allow_hyphen_values = true)]
    l2: i64,
    #[arg(long, allow_hyphen_values = true)]
    l3: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    k: i64,
    /// `scalar=VALUE` or `cube=VALUE`.
    #[arg(long = "tol", value_parser = parse_tol)]
    tol: Vec<(String, f64)>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct VacuumArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    a_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    a_im: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    b_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    b_im: f64,
    /// `clifford=VALUE`.
    #[arg(long = "tol", value_parser = parse_tol)]
    tol: Vec<(String, f64)>,
    #[arg(long)]
    report: Option<PathBuf>,
}

/// Look up named tolerances from a fixed set, rejecting unknown names and negative values.
fn tolerances<const N: usize>(defaults: [(&str, f64); N], overrides: &[(String, f64)]) -> Result<[f64; N], CliError> {
    let mut out = defaults.map(|(_, v)| v);
    for (name, value) in overrides {
        let slot = defaults.iter().position(|(n, _)| n == name).ok_or_else(|| CliError::Invalid(format!("unknown tolerance {name:?}")))?;
        if !(value.is_finite() && *value >= 0.0) {
            return Err(CliError::Invalid(format!("tolerance {name} must be >= 0, got {value}")));
        }
        out[slot] = *value;
    }
    Ok(out)
}

#[derive(Serialize)]
struct Check {
    residual: f64,
    tolerance: f64,
    passed: bool,
}

impl Check {
    fn new(residual: f64, tolerance: f64) -> Self {
        Check { residual, tolerance, passed: residual < tolerance }
    }
}

#[derive(Serialize)]
struct ClosingReport {
    lambda0: [f64; 2],
    l: [i64; 3],
    k: i64,
    delta: [f64; 2],
    c: [f64; 2],
    checks: ClosingChecks,
    passed: bool,
}

#[derive(Serialize)]
struct ClosingChecks {
    scalar: Check,
    cube: Check,
}

#[derive(Serialize)]
struct VacuumReport {
    a: [f64; 2],
    b: [f64; 2],
    delta_rot: f64,
    scale: [f64; 2],
    check: Check,
    passed: bool,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn verdict(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Compute(args) => {
            let config = args.resolve()?;
            let run = compute::run(&config, "compute")?;
            output::emit(config.csv.as_deref(), &run.csv)?;
            if let Some(path) = &config.report {
                output::emit(Some(path), &output::json(&run.report))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let config = args.resolve()?;
            let run = compute::run(&config, "verify")?;
            if let Some(path) = &config.csv {
                output::emit(Some(path), &run.csv)?;
            }
            output::emit(config.report.as_deref(), &output::json(&run.report))?;
            Ok(verdict(run.report.passed))
        }
        Command::CliffordClosing(args) => {
            let [scalar, cube] = tolerances([("scalar", 1e-10), ("cube", 1e-10)], &args.tol)?;
            if !args.theta.is_finite() {
                return Err(CliError::Invalid(format!("theta must be finite, got {}", args.theta)));
            }
            let lambda0 = unit_lambda(args.theta);
            let l = [args.l1, args.l2, args.l3];
            let r = clifford_closing(lambda0, l, args.k, f64::INFINITY)?;
            let checks = ClosingChecks { scalar: Check::new(r.off_diagonal, scalar), cube: Check::new(r.cube_defect, cube) };
            let passed = checks.scalar.passed && checks.cube.passed;
            let report = ClosingReport { lambda0: pair(lambda0), l, k: args.k, delta: pair(r.delta), c: pair(r.c), checks, passed };
            output::emit(args.report.as_deref(), &output::json(&report))?;
            Ok(verdict(passed))
        }
        Command::Vacuum(args) => {
            let [clifford] = tolerances([("clifford", 1e-12)], &args.tol)?;
            let a = Complex64::new(args.a_re, args.a_im);
            let b = Complex64::new(args.b_re, args.b_im);
            let v = normalize_vacuum(a, b)?;
            let check = Check::new(v.residual, clifford);
            let passed = check.passed;
            let report = VacuumReport { a: pair(a), b: pair(b), delta_rot: v.delta_rot, scale: pair(v.scale), check, passed };
            output::emit(args.report.as_deref(), &output::json(&report))?;
            Ok(verdict(passed))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("mlsurf: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
