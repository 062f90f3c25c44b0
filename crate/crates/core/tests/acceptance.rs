//! The twelve acceptance criteria, one line each, with pinned tolerances.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use common::*;
use mlsurf_core::immersion::*;
use mlsurf_core::iwasawa::{beta_closed_2omega, extended_frame, factors, maurer_cartan, plus_factor, q_factor};
use mlsurf_core::linalg::hermitian;
use mlsurf_core::metric::MetricProfile;
use mlsurf_core::spectral::{build_d, eigen, twist};
use mlsurf_core::{CMatrix3, CVector3, Complex64, DegenerateKind, Error};

/// Worst residual per named check, each with its pinned tolerance.
#[derive(Default)]
struct Checks(Vec<(&'static str, f64, f64)>);

impl Checks {
    fn record(&mut self, name: &'static str, value: f64, tol: f64) {
        let value = if value.is_nan() { f64::INFINITY } else { value };
        match self.0.iter_mut().find(|(n, _, _)| *n == name) {
            Some(entry) => entry.1 = entry.1.max(value),
            None => self.0.push((name, value, tol)),
        }
    }

    fn flag(&mut self, name: &'static str, ok: bool) {
        self.record(name, if ok { 0.0 } else { 1.0 }, 0.5);
    }

    fn passed(&self) -> bool {
        self.0.iter().all(|(_, v, t)| v < t)
    }

    fn summary(&self) -> String {
        self.0.iter().map(|(n, v, t)| format!("{n}={v:.2e}{}{t:.0e}", if v < t { "<" } else { "!<" })).collect::<Vec<_>>().join(", ")
    }
}

type Outcome = Result<Checks, Error>;
type Criterion = (&'static str, fn() -> Outcome);

fn generic_profile() -> MetricProfile {
    MetricProfile::new(A1, psi()).unwrap()
}

fn admissible_angles(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = Lcg(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let t = rng.range(0.0, 2.0 * PI);
        let r = (t / (PI / 6.0)).fract();
        if r > 0.1 && r < 0.9 {
            out.push(t);
        }
    }
    out
}

fn omega_oracle(m: &MetricProfile, lam: Complex64, y: f64) -> Result<CMatrix3, Error> {
    let v = m.eval(y)?;
    let i = c(0.0, 1.0);
    let half = v.w.sqrt();
    let dg = -i * v.du / 2.0;
    let li = lam.inv();
    Ok(CMatrix3::new(
        dg,
        -i * lam * m.psi.conj() / v.w,
        i * li * half,
        -i * li * m.psi / v.w,
        -dg,
        i * lam * half,
        i * lam * half,
        i * li * half,
        c(0.0, 0.0),
    ))
}

fn weierstrass() -> Outcome {
    let mut ch = Checks::default();
    let p = generic_profile().elliptic;
    let mut n = 0;
    // 100 points of the period cell at least 0.25 half-periods away from every lattice point;
    // closer in, rounding alone makes the absolute residual grow like 4ε|℘|³.
    for i in 0..10 {
        for j in 0..10 {
            let s = 0.25 + 1.5 * i as f64 / 9.0;
            let t = 0.25 + 1.5 * j as f64 / 9.0;
            let z = c(p.omega * s, p.omega_prime.im * t);
            let v = p.eval(z)?;
            let r = v.wp_prime * v.wp_prime - (v.wp * v.wp * v.wp * 4.0 - v.wp * p.g2 - p.g3);
            ch.record("ode", r.norm(), 1e-10);
            n += 1;
        }
    }
    for i in 0..10 {
        for j in 0..10 {
            let z = c(2.0 * p.omega * (i as f64 + 0.5) / 10.0, 2.0 * p.omega_prime.im * (j as f64 + 0.5) / 10.0);
            let v = p.eval(z)?;
            let r = v.wp_prime * v.wp_prime - (v.wp * v.wp * v.wp * 4.0 - v.wp * p.g2 - p.g3);
            let scale = 4.0 * v.wp.norm().powi(3) + p.g2.abs() * v.wp.norm() + p.g3.abs();
            ch.record("ode relative, full cell", r.norm() / scale, 1e-14);
        }
    }
    ch.flag("samples=100", n == 100);
    ch.record("wp(omega)-e1", (p.wp(c(p.omega, 0.0))? - p.e1).norm(), 1e-10);
    ch.record("wp(omega')-e3", (p.wp(p.omega_prime)? - p.e3).norm(), 1e-10);
    Ok(ch)
}

fn psi_zero_degeneration() -> Outcome {
    let mut ch = Checks::default();
    let near = MetricProfile::new(1.0, c(2.2e-5, 0.0))?;
    ch.flag("generic path", near.kind == DegenerateKind::Generic);
    ch.record("delta scale", near.elliptic.delta.abs() / 1e-5, 1.0);
    let beta = near.beta;
    let e = &near.elliptic;
    for z in [c(0.5, 0.0), c(1.0, 0.3), c(0.2, -0.8), c(0.8, 0.6)] {
        let closed = beta / 3.0 + beta / (z * beta.sqrt()).sinh().powi(2);
        ch.record("wp vs closed", (e.wp(z)? - closed).norm(), 1e-7);
    }
    for k in 0..=20 {
        let y = 0.1 * k as f64;
        let closed = beta / (2.0 * (beta.sqrt() * y).cosh().powi(2));
        ch.record("metric vs sech2", (near.eval(y)?.w - closed).abs(), 1e-8);
    }
    Ok(ch)
}

fn gauss() -> Outcome {
    let mut ch = Checks::default();
    for a1 in [A1, 0.8] {
        let m = MetricProfile::new(a1, psi())?;
        let period = 2.0 * m.omega();
        for k in 0..=100 {
            let y = period * k as f64 / 100.0;
            let g = m.check_gauss(y)?;
            ch.record("gauss ode", g.ode.abs(), 1e-9);
            ch.record("first integral", g.first_integral.abs(), 1e-9);
            let w = m.eval(y)?.w;
            ch.record("periodic", (m.eval(y + period)?.w - w).abs(), 1e-10);
            ch.record("even", (m.eval(-y)?.w - w).abs(), 1e-10);
        }
    }
    Ok(ch)
}

fn spectral_relations() -> Outcome {
    let mut ch = Checks::default();
    let mut rng = Lcg(41);
    for _ in 0..50 {
        let m = MetricProfile::new(rng.range(0.5, 2.5), psi())?;
        let lam = Complex64::from_polar(1.0, rng.range(0.0, 2.0 * PI));
        let s = eigen(&build_d(&m, lam)?, m.beta, m.psi)?;
        let [a, b, d] = s.d;
        ch.record("sum", (a + b + d).abs(), 1e-10);
        ch.record("pairs", (a * b + b * d + d * a + m.beta).abs(), 1e-10);
        ch.record("product", (a * b * d + 2.0 * twist(lam, m.psi).re).abs(), 1e-10);
    }
    Ok(ch)
}

fn conjugation() -> Outcome {
    let mut ch = Checks::default();
    for (a1, theta) in [(A1, PI / 5.0), (1.7, 2.0), (0.8, 1.0)] {
        let m = MetricProfile::new(a1, psi())?;
        let lam = Complex64::from_polar(1.0, theta);
        let d = build_d(&m, lam)?.entries;
        let period = 2.0 * m.omega();
        for k in 0..=100 {
            let y = period * k as f64 / 100.0;
            let q = q_factor(&m, lam, y)?;
            let qm = q.q();
            ch.record("QD-OmegaQ", max_abs(&(qm * d - omega_oracle(&m, lam, y)? * qm)), 1e-9);
            ch.record("det Qtilde", (det3(&q.qtilde) - 1.0).norm(), 1e-10);
        }
        ch.record("Qtilde(0)", max_abs(&(q_factor(&m, lam, 0.0)?.qtilde - CMatrix3::identity())), 1e-12);
    }
    Ok(ch)
}

fn frame_checks() -> Outcome {
    let mut ch = Checks::default();
    let m = generic_profile();
    let lam = lambda();
    let d = build_d(&m, lam)?;
    let s = eigen(&d, m.beta, m.psi)?;
    let frame = |z: Complex64| -> Result<CMatrix3, Error> { extended_frame(&m, &s, &factors(&m, lam, z.im)?, z) };
    ch.record("F(0)=I", max_abs(&(frame(c(0.0, 0.0))? - CMatrix3::identity())), 1e-12);
    let mut rng = Lcg(7);
    for _ in 0..20 {
        let z = c(rng.range(-2.0, 2.0), rng.range(0.0, 2.0));
        let f = factors(&m, lam, z.im)?;
        let fr = extended_frame(&m, &s, &f, z)?;
        ch.record("unitary", max_abs(&(fr.adjoint() * fr - CMatrix3::identity())), 1e-8);
        ch.record("exp(zD)=F U+", max_abs(&((d.entries * z).exp() - fr * plus_factor(&m, &s, &f))), 1e-8);
    }
    let mut samples = Vec::new();
    for l in circle(64) {
        let sp = eigen(&build_d(&m, l)?, m.beta, m.psi)?;
        samples.push((l, plus_factor(&m, &sp, &factors(&m, l, 0.5)?)));
    }
    let negative: f64 = (-31..0).map(|n| max_abs(&fourier(&samples, n))).sum();
    ch.record("negative mass of U+", negative, 1e-6);
    let h = 1e-4;
    let i = c(0.0, 1.0);
    for z in [c(0.3, 0.45), c(-0.8, 1.2), c(1.1, 1.7)] {
        let finv = frame(z)?.adjoint();
        let fx = (frame(z + h)? - frame(z - h)?) / c(2.0 * h, 0.0);
        let fy = (frame(z + i * h)? - frame(z - i * h)?) / c(2.0 * h, 0.0);
        let (u, v) = maurer_cartan(&m, lam, z.im)?;
        ch.record("maurer-cartan", max_abs(&(finv * fx - (u + v))).max(max_abs(&(finv * fy - (u - v) * i))), 1e-5);
    }
    Ok(ch)
}

fn closed_forms() -> Outcome {
    let mut ch = Checks::default();
    for (a1, theta) in [(A1, PI / 5.0), (1.6, 0.4), (1.1, 2.0)] {
        let m = MetricProfile::new(a1, psi())?;
        let lam = Complex64::from_polar(1.0, theta);
        let l3 = lam.powi(3);
        let s0 = l3 * m.psi.conj() - m.psi / l3;
        let i = c(0.0, 1.0);
        let top = 2.0 * m.omega();
        let n = 40000;
        let failure = std::cell::RefCell::new(None);
        let integrand = |f: &dyn Fn(f64, f64, f64) -> Complex64| {
            simpson(
                |y| match m.eval(y) {
                    Ok(v) => f(v.w, v.du, v.dw),
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        c(0.0, 0.0)
                    }
                },
                0.0,
                top,
                n,
            )
        };
        let b1 = integrand(&|w, du, dw| (2.0 * i * l3 * m.psi.conj() - i * du * w) / (s0 - dw));
        let b2 = integrand(&|w, _, dw| c(2.0 * w, 0.0) / (s0 - dw));
        let (c1, c2) = beta_closed_2omega(&m, lam)?;
        ch.record("beta1(2w)", (b1 - c1).norm(), 1e-8);
        ch.record("beta2(2w)", (b2 - c2).norm(), 1e-8);
        let mt = twist(lam, m.psi);
        let sp = eigen(&build_d(&m, lam)?, m.beta, m.psi)?;
        let g = g_closed_2omega(&m, lam)?;
        for (dj, gj) in sp.d.into_iter().zip(g) {
            let direct = integrand(&|w, _, _| c(dj * mt.im / (dj * w - mt.re), 0.0));
            ch.record("G_j(2w)", (direct.re - gj).abs(), 1e-8);
        }
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
    }
    let m = generic_profile();
    let real = c(-1.0, 0.0);
    let (r1, r2) = beta_closed_2omega(&m, real)?;
    ch.record("real limit beta1", (r1 - c(0.0, 2.0 * m.omega())).norm(), 1e-10);
    ch.record("real limit beta2", r2.norm(), 1e-10);
    ch.record("real limit G", g_closed_2omega(&m, real)?.iter().fold(0.0, |a, g| a.max(g.abs())), 1e-10);
    Ok(ch)
}

fn monodromy() -> Outcome {
    let mut ch = Checks::default();
    let m = generic_profile();
    for theta in admissible_angles(10, 17) {
        for r in monodromy_vanishing(&m, Complex64::from_polar(1.0, theta))? {
            ch.record("vanishing", r.abs(), 1e-8);
        }
    }
    let om = m.omega();
    for y in [om / 3.0, 0.5 * om, 0.9 * om, 1.3 * om, 1.8 * om] {
        let id = running_identity(&m, lambda(), y)?;
        for v in id.lhs {
            ch.record("running arctan", (v - id.rhs).abs(), 1e-8);
        }
    }
    Ok(ch)
}

fn lift_agreement() -> Outcome {
    let mut ch = Checks::default();
    let s = Surface::new(generic_profile(), lambda())?;
    let m = &s.profile;
    let sp = s.spectral()?;
    for i in 0..6 {
        for j in 0..6 {
            let z = c(-1.5 + 0.6 * i as f64, 2.0 * m.omega() * j as f64 / 5.0);
            let cu = lift_amplitude_phase(m, sp, s.lambda, z, false)?;
            let lp = s.lift(z)?;
            for k in 0..3 {
                let l = sp.column(k);
                ch.record("moduli", (hermitian(&cu, &l).norm() - hermitian(&lp, &l).norm()).abs(), 1e-8);
            }
        }
    }
    for y in [0.0, m.omega() / 2.0, m.omega(), 1.5 * m.omega()] {
        let h = lift_coefficients(m, sp, s.lambda, y)?.h;
        ch.record("sum h^2", (h.iter().map(|v| v * v).sum::<f64>() - 1.0).abs(), 1e-9);
    }
    for (x, y, t) in [(0.2, 0.3, 0.9), (-1.0, 1.4, 2.5), (0.5, 2.1, -1.7)] {
        let lhs = s.lift(c(x + t, y))?;
        let rhs = (s.d.entries * c(t, 0.0)).exp() * s.lift(c(x, y))?;
        ch.record("x-translation", (lhs - rhs).norm(), 1e-9);
    }
    Ok(ch)
}

fn geometry() -> Outcome {
    let mut ch = Checks::default();
    let cases = [
        (MetricProfile::new(A1, psi())?, lambda()),
        (MetricProfile::new(A1, psi())?, c(1.0, 0.0)),
        (MetricProfile::new(A1, c(0.0, 0.0))?, lambda()),
        (MetricProfile::new(1.0, psi())?, lambda()),
    ];
    for (m, lam) in cases {
        let s = Surface::new(m, lam)?;
        let mut pts = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                pts.push(c(-1.0 + 0.6 * i as f64, 0.05 + 0.6 * j as f64));
            }
        }
        let r = hopf_and_metric_check(|z| s.lift(z), &s.profile, s.expected_hopf(), &pts, FdSteps::default())?;
        ch.record("|F|=1", r.unit_norm, 1e-8);
        ch.record("horizontal", r.horizontality, 1e-5);
        ch.record("conformal", r.conformality, 1e-5);
        ch.record("e^u", r.metric, 1e-5);
        ch.record("hopf", r.hopf, 1e-4);
    }
    Ok(ch)
}

fn clifford() -> Outcome {
    let mut ch = Checks::default();
    let alpha = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let mut solutions = 0;
    for theta in [0.0, 0.7, 2.9, -1.3] {
        let lam0 = Complex64::from_polar(1.0, theta);
        for l1 in -3i64..=3 {
            for l2 in -3i64..=3 {
                for l3 in -3i64..=3 {
                    for k in 0..=2 {
                        if l1 + l2 + l3 + 1 + k != 0 {
                            continue;
                        }
                        let r = clifford_closing(lam0, [l1, l2, l3], k, 1e-12)?;
                        ch.record("off-diagonal", r.off_diagonal, 1e-12);
                        ch.record("c^3-1", r.cube_defect, 1e-12);
                        let base = closing_period(c(1.0, 0.0), [l1, l2, l3], k)?;
                        ch.record("delta rotation", (r.delta - lam0 * base).norm(), 1e-14);
                        let mut oracle = CMatrix3::zeros();
                        for j in 0..3 {
                            let v = CVector3::new(c(1.0, 0.0), alpha.powi(-j), alpha.powi(-2 * j)) / c(3f64.sqrt(), 0.0);
                            let zeta = r.delta / lam0 * alpha.powi(j);
                            oracle += v * v.adjoint() * Complex64::from_polar(1.0, 2.0 * zeta.re);
                        }
                        ch.record("eigen oracle", max_abs(&(oracle - r.monodromy)), 1e-12);
                        solutions += 1;
                    }
                }
            }
        }
    }
    ch.flag("solutions found", solutions > 0);
    ch.flag("constraint rejected", matches!(clifford_closing(c(1.0, 0.0), [0, 0, 0], 0, 1e-12), Err(Error::ClosingConstraint { .. })));
    Ok(ch)
}

fn vacuum() -> Outcome {
    let mut ch = Checks::default();
    let mut rng = Lcg(29);
    for _ in 0..20 {
        let r = rng.range(0.1, 5.0);
        let a = Complex64::from_polar(r, rng.range(-PI, PI));
        let b = Complex64::from_polar(r, rng.range(-PI, PI));
        let v = normalize_vacuum(a, b)?;
        let rot = CMatrix3::from_diagonal(&CVector3::new(
            Complex64::from_polar(1.0, v.delta_rot),
            Complex64::from_polar(1.0, -v.delta_rot),
            c(1.0, 0.0),
        ));
        let mapped = rot * vacuum_matrix(a, b) * rot.adjoint() / v.scale;
        ch.record("to clifford", max_abs(&(mapped - clifford_matrix())), 1e-12);
    }
    let i = c(0.0, 1.0);
    ch.flag("non-vacuum rejected", matches!(normalize_vacuum(i, i * 1.5), Err(Error::NotVacuum { .. })));
    ch.flag("zero rejected", normalize_vacuum(c(0.0, 0.0), c(0.0, 0.0)).is_err());
    Ok(ch)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("Weierstrass ODE and half-period values", weierstrass),
        ("degeneration to the psi = 0 closed forms", psi_zero_degeneration),
        ("Gauss equation, first integral, periodicity, evenness", gauss),
        ("symmetric functions of the spectral parameters", spectral_relations),
        ("conjugation QDQ^-1 = Omega and normalization of Q", conjugation),
        ("extended frame, plus factor and Maurer-Cartan form", frame_checks),
        ("closed forms at 2 omega against direct integration", closed_forms),
        ("monodromy vanishing and running identity", monodromy),
        ("loop and amplitude-phase lifts agree", lift_agreement),
        ("surface geometry from finite differences", geometry),
        ("Clifford closing conditions", clifford),
        ("vacuum normalization", vacuum),
    ];
    let mut failed = 0;
    for (n, (title, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let (ok, detail) = match outcome {
            Ok(Ok(ch)) => (ch.passed(), ch.summary()),
            Ok(Err(e)) => (false, format!("error: {e}")),
            Err(_) => (false, "panicked".to_string()),
        };
        if !ok {
            failed += 1;
        }
        println!("[{}] criterion {}: {title} ({detail})", if ok { "PASS" } else { "FAIL" }, n + 1);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
