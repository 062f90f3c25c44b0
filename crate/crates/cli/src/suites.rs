//! Verification suites run by `compute` and `verify`, each with a named, overridable tolerance.

use mlsurf_core::immersion::{
    g_closed_2omega, hopf_and_metric_check, lift_amplitude_phase, monodromy_vanishing, phase_integrals, FdSteps, LiftPath, Surface,
};
use mlsurf_core::iwasawa::{beta_closed_2omega, beta_integrals, extended_frame, factors, omega_matrix, plus_factor, q_factor};
use mlsurf_core::linalg::{hermitian, max_abs, unitarity_defect};
use mlsurf_core::metric::MetricProfile;
use mlsurf_core::spectral::twist;
use mlsurf_core::{CMatrix3, CVector3, Complex64, DegenerateKind};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;

pub const DEFAULT_TOLERANCES: [(&str, f64); 19] = [
    ("weierstrass_ode", 1e-10),
    ("half_periods", 1e-10),
    ("gauss", 1e-9),
    ("periodicity", 1e-10),
    ("spectral", 1e-10),
    ("conjugation", 1e-9),
    ("det_q", 1e-10),
    ("frame_origin", 1e-12),
    ("frame_unitarity", 1e-8),
    ("plus_factor", 1e-8),
    ("beta_closed", 1e-8),
    ("g_closed", 1e-8),
    ("monodromy", 1e-8),
    ("lift_agreement", 1e-8),
    ("unit_norm", 1e-8),
    ("horizontality", 1e-5),
    ("conformality", 1e-5),
    ("metric_recovery", 1e-5),
    ("hopf_recovery", 1e-4),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub theta: Option<f64>,
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
}

enum Measured {
    Value(f64),
    Skipped(&'static str),
}

use Measured::{Skipped, Value};

type Outcome = mlsurf_core::Result<Measured>;

fn judge(config: &RunConfig, name: &'static str, theta: Option<f64>, outcome: Measured) -> SuiteResult {
    let tolerance = config.tolerance(name);
    let (residual, status, note) = match outcome {
        Value(r) => (Some(r), if r < tolerance { Status::Pass } else { Status::Fail }, None),
        Skipped(why) => (None, Status::Skipped, Some(why)),
    };
    SuiteResult { name, theta, residual, tolerance, status, note }
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    // NaN counts as the worst possible residual
    values.into_iter().fold(0.0, |a, v| if v.is_nan() { f64::INFINITY } else { a.max(v) })
}

fn generic_only(profile: &MetricProfile) -> Option<Measured> {
    (profile.kind != DegenerateKind::Generic).then_some(Skipped("closed-form metric, no generic lattice"))
}

/// Suites that depend only on the metric profile.
pub fn profile_suites(config: &RunConfig, profile: &MetricProfile) -> Result<Vec<SuiteResult>, CliError> {
    let e = &profile.elliptic;
    let ode = || -> Outcome {
        if let Some(s) = generic_only(profile) {
            return Ok(s);
        }
        let mut out = Vec::new();
        for i in 0..10 {
            for j in 0..10 {
                let z = Complex64::new(e.omega * (0.25 + 1.5 * i as f64 / 9.0), e.omega_prime.im * (0.25 + 1.5 * j as f64 / 9.0));
                let v = e.eval(z)?;
                out.push((v.wp_prime * v.wp_prime - (v.wp * v.wp * v.wp * 4.0 - v.wp * e.g2 - e.g3)).norm());
            }
        }
        Ok(Value(worst(out)))
    };
    let half = || -> Outcome {
        if let Some(s) = generic_only(profile) {
            return Ok(s);
        }
        let a = (e.wp(Complex64::new(e.omega, 0.0))? - e.e1).norm();
        let b = (e.wp(e.omega_prime)? - e.e3).norm();
        Ok(Value(a.max(b)))
    };
    let span = if profile.omega().is_finite() { 2.0 * profile.omega() } else { 4.0 };
    let heights: Vec<f64> = (0..=100).map(|k| span * k as f64 / 100.0).collect();
    let gauss = || -> Outcome {
        let mut out = Vec::new();
        for &y in &heights {
            let g = profile.check_gauss(y)?;
            out.push(g.ode.abs().max(g.first_integral.abs()));
        }
        Ok(Value(worst(out)))
    };
    let periodic = || -> Outcome {
        let mut out = Vec::new();
        for &y in &heights {
            let w = profile.eval(y)?.w;
            out.push((profile.eval(-y)?.w - w).abs());
            if profile.omega().is_finite() {
                out.push((profile.eval(y + span)?.w - w).abs());
            }
        }
        Ok(Value(worst(out)))
    };
    let mut results = Vec::new();
    for (name, run) in
        [("weierstrass_ode", &ode as &dyn Fn() -> Outcome), ("half_periods", &half), ("gauss", &gauss), ("periodicity", &periodic)]
    {
        results.push(judge(config, name, None, run()?));
    }
    Ok(results)
}

/// Up to nine points of the grid: corners, edge midpoints and centre.
pub fn probe_points(config: &RunConfig) -> Vec<Complex64> {
    let xs = config.grid.xs();
    let ys = config.grid.ys();
    let pick = |v: &[f64]| {
        let mut idx = vec![0, v.len() / 2, v.len() - 1];
        idx.dedup();
        idx.into_iter().map(|i| v[i]).collect::<Vec<_>>()
    };
    let mut out = Vec::new();
    for y in pick(&ys) {
        for x in pick(&xs) {
            out.push(Complex64::new(x, y));
        }
    }
    out
}

/// Suites for one `λ = e^{iθ}`; `lifts` are the sampled grid values for that `θ`.
pub fn lambda_suites(config: &RunConfig, theta: f64, surface: &Surface, lifts: &[CVector3]) -> mlsurf_core::Result<Vec<SuiteResult>> {
    let m = &surface.profile;
    let lam = surface.lambda;
    let points = probe_points(config);
    let is_loop = surface.path == LiftPath::Loop;
    let loop_only = || Skipped("lift is not built from Iwasawa factors at this lambda");
    let period = 2.0 * m.omega();

    let spectral = || -> Outcome {
        let Some(s) = &surface.spectral else {
            return Ok(Skipped("degenerate spectrum of the flat potential"));
        };
        let [a, b, c] = s.d;
        let re = twist(lam, m.psi).re;
        Ok(Value(worst([(a + b + c).abs(), (a * b + b * c + c * a + m.beta).abs(), (a * b * c + 2.0 * re).abs()])))
    };
    let conjugation = |det: bool| -> Outcome {
        if !is_loop {
            return Ok(loop_only());
        }
        let mut out = Vec::new();
        for k in 0..=40 {
            let y = period * k as f64 / 40.0;
            let q = q_factor(m, lam, y)?;
            if det {
                out.push((q.qtilde.determinant() - 1.0).norm());
            } else {
                let qm = q.q();
                out.push(max_abs(&(qm * surface.d.entries - omega_matrix(m, lam, y)? * qm)));
            }
        }
        Ok(Value(worst(out)))
    };
    let frame_at = |z: Complex64| -> mlsurf_core::Result<Option<CMatrix3>> { Ok(surface.sample(z)?.frame) };
    let frame_origin = || -> Outcome {
        Ok(match frame_at(Complex64::new(0.0, 0.0))? {
            Some(f) => Value(max_abs(&(f - CMatrix3::identity()))),
            None => Skipped("real-twist lift carries no frame"),
        })
    };
    let unitarity = || -> Outcome {
        let mut out = Vec::new();
        for &z in &points {
            match frame_at(z)? {
                Some(f) => out.push(unitarity_defect(&f)),
                None => return Ok(Skipped("real-twist lift carries no frame")),
            }
        }
        Ok(Value(worst(out)))
    };
    let plus = || -> Outcome {
        if !is_loop {
            return Ok(loop_only());
        }
        let s = surface.spectral()?;
        let mut out = Vec::new();
        for &z in &points {
            let f = factors(m, lam, z.im)?;
            let product = extended_frame(m, s, &f, z)? * plus_factor(m, s, &f);
            out.push(max_abs(&((surface.d.entries * z).exp() - product)));
        }
        Ok(Value(worst(out)))
    };
    let beta_closed = || -> Outcome {
        if !is_loop {
            return Ok(loop_only());
        }
        let (q1, q2) = beta_integrals(m, lam, period)?;
        let (c1, c2) = beta_closed_2omega(m, lam)?;
        Ok(Value((q1 - c1).norm().max((q2 - c2).norm())))
    };
    let g_closed = || -> Outcome {
        if !is_loop {
            return Ok(loop_only());
        }
        let quad = phase_integrals(m, surface.spectral()?, lam, period)?;
        let closed = g_closed_2omega(m, lam)?;
        Ok(Value(worst((0..3).map(|j| (quad[j] - closed[j]).abs()))))
    };
    let monodromy = || -> Outcome {
        if !is_loop {
            return Ok(loop_only());
        }
        Ok(Value(worst(monodromy_vanishing(m, lam)?.map(f64::abs))))
    };
    let agreement = || -> Outcome {
        if !is_loop {
            return Ok(loop_only());
        }
        let s = surface.spectral()?;
        let mut out = Vec::new();
        for &z in &points {
            let cu = lift_amplitude_phase(m, s, lam, z, false)?;
            let lp = surface.lift(z)?;
            for j in 0..3 {
                let l = s.column(j);
                out.push((hermitian(&cu, &l).norm() - hermitian(&lp, &l).norm()).abs());
            }
        }
        Ok(Value(worst(out)))
    };
    let unit = || -> Outcome { Ok(Value(worst(lifts.iter().map(|f| (f.norm() - 1.0).abs())))) };

    let geometry = hopf_and_metric_check(|z| surface.lift(z), m, surface.expected_hopf(), &points, FdSteps::default())?;

    let mut results = Vec::new();
    for (name, run) in [
        ("spectral", &spectral as &dyn Fn() -> Outcome),
        ("conjugation", &|| conjugation(false)),
        ("det_q", &|| conjugation(true)),
        ("frame_origin", &frame_origin),
        ("frame_unitarity", &unitarity),
        ("plus_factor", &plus),
        ("beta_closed", &beta_closed),
        ("g_closed", &g_closed),
        ("monodromy", &monodromy),
        ("lift_agreement", &agreement),
        ("unit_norm", &unit),
    ] {
        results.push(judge(config, name, Some(theta), run()?));
    }
    for (name, value) in [
        ("horizontality", geometry.horizontality),
        ("conformality", geometry.conformality),
        ("metric_recovery", geometry.metric),
        ("hopf_recovery", geometry.hopf),
    ] {
        results.push(judge(config, name, Some(theta), Value(value)));
    }
    Ok(results)
}
