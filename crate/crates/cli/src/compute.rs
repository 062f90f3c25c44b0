//! Grid sampling, derived constants and the CSV/JSON artifacts of `compute` and `verify`.

use std::fmt::Write as _;

use mlsurf_core::immersion::{g_closed_2omega, LiftPath, Surface};
use mlsurf_core::iwasawa::beta_closed_2omega;
use mlsurf_core::metric::MetricProfile;
use mlsurf_core::spectral::twist;
use mlsurf_core::{unit_lambda, CVector3, Complex64, DegenerateKind};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::suites::{lambda_suites, profile_suites, Status, SuiteResult};

/// `|Re(λ⁻³ψ)|` below this (relative to `|ψ|`) puts `λ` in the degenerate set `d₁d₂d₃ = 0`.
pub const DEGENERATE_THRESHOLD: f64 = 1e-10;

pub const CSV_HEADER: &str = "theta,x,y,u,w,f1_re,f1_im,f2_re,f2_im,f3_re,f3_im";

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Debug, Clone, Serialize)]
pub struct Derived {
    pub kind: String,
    pub beta: f64,
    pub g2: f64,
    pub g3: f64,
    pub delta: f64,
    pub e: [f64; 3],
    pub omega: f64,
    pub omega_prime_im: f64,
    pub starts_at_maximum: bool,
}

impl Derived {
    fn new(profile: &MetricProfile) -> Self {
        let e = &profile.elliptic;
        Derived {
            kind: profile.kind.to_string(),
            beta: profile.beta,
            g2: e.g2,
            g3: e.g3,
            delta: e.delta,
            e: [e.e1, e.e2, e.e3],
            omega: e.omega,
            omega_prime_im: e.omega_prime.im,
            starts_at_maximum: profile.starts_at_maximum(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LambdaReport {
    pub theta: f64,
    pub lambda: [f64; 2],
    pub twist: [f64; 2],
    pub path: &'static str,
    pub d: Option<[f64; 3]>,
    pub beta1_2omega: Option<[f64; 2]>,
    pub beta2_2omega: Option<[f64; 2]>,
    pub g_2omega: Option<[f64; 3]>,
}

fn path_name(path: LiftPath) -> &'static str {
    match path {
        LiftPath::Loop => "loop",
        LiftPath::RealTwist => "real-twist",
        LiftPath::Vacuum => "vacuum",
    }
}

impl LambdaReport {
    fn new(theta: f64, surface: &Surface) -> Self {
        let m = &surface.profile;
        let generic = m.kind == DegenerateKind::Generic;
        let betas = generic.then(|| beta_closed_2omega(m, surface.lambda).ok()).flatten();
        LambdaReport {
            theta,
            lambda: pair(surface.lambda),
            twist: pair(twist(surface.lambda, m.psi)),
            path: path_name(surface.path),
            d: surface.spectral.as_ref().map(|s| s.d),
            beta1_2omega: betas.map(|b| pair(b.0)),
            beta2_2omega: betas.map(|b| pair(b.1)),
            g_2omega: generic.then(|| g_closed_2omega(m, surface.lambda).ok()).flatten(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub config: RunConfig,
    pub derived: Derived,
    pub lambdas: Vec<LambdaReport>,
    pub suites: Vec<SuiteResult>,
    pub passed: bool,
}

pub struct Run {
    pub report: Report,
    pub csv: String,
}

fn surface_for(profile: &MetricProfile, theta: f64) -> Result<Surface, CliError> {
    let lambda = unit_lambda(theta);
    if profile.kind == DegenerateKind::Generic {
        let re = twist(lambda, profile.psi).re;
        if re.abs() <= DEGENERATE_THRESHOLD * profile.psi.norm() {
            return Err(CliError::DegenerateTheta {
                theta,
                reason: format!("Re(lambda^-3 psi) = {re:e}, so one spectral parameter vanishes"),
            });
        }
    }
    Surface::new(profile.clone(), lambda).map_err(CliError::at(theta))
}

fn format_row(out: &mut String, theta: f64, x: f64, y: f64, u: f64, w: f64, f: &CVector3) {
    let _ = write!(out, "{theta:.16e},{x:.16e},{y:.16e},{u:.16e},{w:.16e}");
    for c in f.iter() {
        let _ = write!(out, ",{:.16e},{:.16e}", c.re, c.im);
    }
    out.push('\n');
}

/// Sample every `θ` over the grid and run the suites. Rows are computed in parallel and written
/// in `(θ, y, x)` order, so the output does not depend on the thread count.
pub fn run(config: &RunConfig, command: &'static str) -> Result<Run, CliError> {
    let profile = MetricProfile::new(config.a1, config.psi())?;
    let surfaces: Vec<Surface> = config.theta.iter().map(|&t| surface_for(&profile, t)).collect::<Result<_, _>>()?;
    let xs = config.grid.xs();
    let ys = config.grid.ys();

    let tasks: Vec<(usize, f64)> = (0..surfaces.len()).flat_map(|k| ys.iter().map(move |&y| (k, y))).collect();
    let work = || -> Result<Vec<(String, Vec<CVector3>)>, CliError> {
        tasks
            .par_iter()
            .map(|&(k, y)| {
                let theta = config.theta[k];
                let at = CliError::at(theta);
                let lifts = surfaces[k].lift_row(y, &xs).map_err(&at)?;
                let v = profile.eval(y).map_err(&at)?;
                let mut text = String::new();
                for (x, f) in xs.iter().zip(&lifts) {
                    format_row(&mut text, theta, *x, y, v.u, v.w, f);
                }
                Ok((text, lifts))
            })
            .collect()
    };
    let suites_for =
        |k: usize, lifts: &[CVector3]| lambda_suites(config, config.theta[k], &surfaces[k], lifts).map_err(CliError::at(config.theta[k]));

    let (rows, per_lambda) = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(|| collect(&work, &suites_for, &surfaces, ys.len()))?,
        None => collect(&work, &suites_for, &surfaces, ys.len())?,
    };

    let mut csv = String::with_capacity(rows.len() * xs.len() * 200);
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    for (text, _) in &rows {
        csv.push_str(text);
    }
    let mut suites = profile_suites(config, &profile)?;
    suites.extend(per_lambda.into_iter().flatten());
    let passed = suites.iter().all(|s| s.status != Status::Fail);
    let lambdas = config.theta.iter().zip(&surfaces).map(|(&t, s)| LambdaReport::new(t, s)).collect();
    let report = Report { command, config: config.clone(), derived: Derived::new(&profile), lambdas, suites, passed };
    Ok(Run { report, csv })
}

type Rows = Vec<(String, Vec<CVector3>)>;

fn collect<W, S>(work: &W, suites_for: &S, surfaces: &[Surface], ny: usize) -> Result<(Rows, Vec<Vec<SuiteResult>>), CliError>
where
    W: Fn() -> Result<Rows, CliError>,
    S: Fn(usize, &[CVector3]) -> Result<Vec<SuiteResult>, CliError> + Sync,
{
    let rows = work()?;
    let per_lambda = (0..surfaces.len())
        .into_par_iter()
        .map(|k| {
            let lifts: Vec<CVector3> = rows[k * ny..(k + 1) * ny].iter().flat_map(|(_, l)| l.iter().copied()).collect();
            suites_for(k, &lifts)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((rows, per_lambda))
}
