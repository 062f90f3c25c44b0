mod common;

use std::f64::consts::PI;

use common::*;
use mlsurf_core::metric::MetricProfile;
use mlsurf_core::spectral::{build_d, degenerate_lambdas, eigen, real_twist_lambdas, twist, SpectralData};
use mlsurf_core::{CMatrix3, Complex64, Error};
use proptest::prelude::*;

fn setup(a1: f64, lam: Complex64) -> (MetricProfile, mlsurf_core::spectral::LoopMatrixD) {
    let m = MetricProfile::new(a1, psi()).unwrap();
    let d = build_d(&m, lam).unwrap();
    (m, d)
}

fn relations(beta: f64, m: Complex64, s: &SpectralData) -> [f64; 3] {
    let [d1, d2, d3] = s.d;
    [(d1 + d2 + d3).abs(), (d1 * d2 + d2 * d3 + d3 * d1 + beta).abs(), (d1 * d2 * d3 + 2.0 * m.re).abs()]
}

fn check_decomposition(d: &CMatrix3, s: &SpectralData, beta: f64) {
    let i = c(0.0, 1.0);
    assert!(max_abs(&(s.l.adjoint() * s.l - CMatrix3::identity())) < 1e-12);
    let diag = CMatrix3::from_diagonal(&nalgebra::Vector3::new(i * s.d[0], i * s.d[1], i * s.d[2]));
    assert!(max_abs(&(d * s.l - s.l * diag)) < 1e-10);
    assert!(max_abs(&(s.l0 * d - d * s.l0)) < 1e-12);
    let rotated = s.l.adjoint() * s.l0 * s.l;
    let ev = s.l0_eigenvalues(beta);
    for r in 0..3 {
        for col in 0..3 {
            let want = if r == col { c(ev[r], 0.0) } else { c(0.0, 0.0) };
            assert!((rotated[(r, col)] - want).norm() < 1e-10);
        }
    }
}

#[test]
fn clifford_potential_and_rejection() {
    let m = MetricProfile::new(1.0, psi()).unwrap();
    let d = build_d(&m, c(1.0, 0.0)).unwrap();
    let i = c(0.0, 1.0);
    let o = c(0.0, 0.0);
    assert!(max_abs(&(d.entries - CMatrix3::new(o, i, i, i, o, i, i, i, o))) < 1e-15);
    // d³ − 3d − 2 = (d − 2)(d + 1)²: degenerate.
    assert!(matches!(eigen(&d, m.beta, m.psi), Err(Error::DegenerateSpectrum { .. })));
}

#[test]
fn skew_hermitian_and_trace_free_on_circle() {
    for theta in [0.0, 0.3, 1.7, -2.4] {
        let (_, d) = setup(A1, Complex64::from_polar(1.0, theta));
        assert!(max_abs(&(d.entries + d.entries.adjoint())) < 1e-15);
        assert!(d.entries.trace().norm() < 1e-15);
    }
}

#[test]
fn characteristic_polynomial_coefficients() {
    let lam = Complex64::from_polar(1.0, PI / 7.0);
    let (m, d) = setup(A1, lam);
    let poly = |mu: Complex64| det3(&(CMatrix3::identity() * mu - d.entries));
    let c0 = poly(c(0.0, 0.0));
    let (p1, pm1) = (poly(c(1.0, 0.0)), poly(c(-1.0, 0.0)));
    let c2 = (p1 + pm1) / 2.0 - c0;
    let c1 = (p1 - pm1) / 2.0 - 1.0;
    let tw = twist(lam, m.psi);
    assert!(c2.norm() < 1e-13);
    assert!((c1 - m.beta).norm() < 1e-13);
    assert!((c0 - c(0.0, -2.0 * tw.re)).norm() < 1e-13);
    // the cubic term is checked at a fourth point
    assert!((poly(c(0.0, 2.0)) - (c(0.0, -8.0) + c2 * -4.0 + c1 * c(0.0, 2.0) + c0)).norm() < 1e-12);
}

#[test]
fn eigen_at_lambda_i_against_companion_oracle() {
    let lam = c(0.0, 1.0);
    let (m, d) = setup(A1, lam);
    let s = eigen(&d, m.beta, m.psi).unwrap();
    let tw = twist(lam, m.psi);
    let oracle = real_sorted_desc(&companion_roots(0.0, -m.beta, 2.0 * tw.re));
    for (a, b) in s.d.iter().zip(oracle) {
        assert!((a - b).abs() < 1e-12);
    }
    for r in relations(m.beta, tw, &s) {
        assert!(r < 1e-10);
    }
    assert!(s.d[0] > s.d[1] && s.d[1] > s.d[2]);
    check_decomposition(&d.entries, &s, m.beta);
}

#[test]
fn fifty_random_samples() {
    let mut rng = Lcg(2024);
    for _ in 0..50 {
        let a1 = rng.range(1.1, 2.0);
        let lam = Complex64::from_polar(1.0, rng.range(0.0, 2.0 * PI));
        let (m, d) = setup(a1, lam);
        let s = match eigen(&d, m.beta, m.psi) {
            Ok(s) => s,
            Err(Error::DegenerateSpectrum { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        for r in relations(m.beta, twist(lam, m.psi), &s) {
            assert!(r < 1e-10);
        }
        check_decomposition(&d.entries, &s, m.beta);
    }
}

#[test]
fn eigenvector_phase_convention() {
    let (m, d) = setup(A1, lambda());
    let s = eigen(&d, m.beta, m.psi).unwrap();
    for j in 0..3 {
        let col = s.column(j);
        let top = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let pivot = col.iter().position(|z| z.norm() >= top * (1.0 - 1e-10)).unwrap();
        assert!(col[pivot].im.abs() < 1e-15 && col[pivot].re > 0.0);
    }
    // deterministic: identical on recomputation
    assert_eq!(eigen(&d, m.beta, m.psi).unwrap(), s);
}

#[test]
fn off_circle_construction_is_allowed_but_eigen_refuses() {
    let (m, d) = setup(A1, c(0.5, 0.0));
    assert!(max_abs(&(d.entries + d.entries.adjoint())) > 0.1);
    assert!(matches!(eigen(&d, m.beta, m.psi), Err(Error::OffUnitCircle { .. })));
}

#[test]
fn degenerate_lambda_sets() {
    let lams = degenerate_lambdas(psi()).unwrap();
    for (k, l) in lams.iter().enumerate() {
        assert!((l.arg().rem_euclid(2.0 * PI) - (PI / 6.0 + k as f64 * PI / 3.0)).abs() < 1e-14);
        assert!((l.norm() - 1.0).abs() < 1e-15);
        let (m, d) = setup(A1, *l);
        let s = eigen(&d, m.beta, m.psi).unwrap();
        assert!((s.d[0] * s.d[1] * s.d[2]).abs() < 1e-10);
    }
    let lams = degenerate_lambdas(c(0.0, 1.0)).unwrap();
    assert!((lams[0] - 1.0).norm() < 1e-15);
    assert!(twist(c(1.0, 0.0), c(0.0, 1.0)).re == 0.0);
    assert!(matches!(degenerate_lambdas(c(0.0, 0.0)), Err(Error::ZeroHopf)));
    for l in real_twist_lambdas(psi()).unwrap() {
        assert!(twist(l, psi()).im.abs() < 1e-14);
    }
}

#[test]
fn fourier_classes_follow_the_twist() {
    // Entry (r, c) of D and of λ³L₀ only carries powers λⁿ with n ≡ c − r (mod 3).
    let m = MetricProfile::new(A1, c(-0.6, 0.8)).unwrap();
    let samples: Vec<(Complex64, CMatrix3, CMatrix3)> = circle(64)
        .into_iter()
        .map(|lam| {
            let d = build_d(&m, lam).unwrap().entries;
            let l0 = d * d - CMatrix3::identity() * ((d * d).trace() / 3.0);
            (lam, d, l0 * lam.powi(3))
        })
        .collect();
    let d_samples: Vec<_> = samples.iter().map(|(l, d, _)| (*l, *d)).collect();
    let l0_samples: Vec<_> = samples.iter().map(|(l, _, l0)| (*l, *l0)).collect();
    for set in [&d_samples, &l0_samples] {
        let mut total = 0.0;
        for n in -8..=8 {
            let coeff = fourier(set, n);
            for r in 0..3 {
                for col in 0..3 {
                    let allowed = (n - (col as i32 - r as i32)).rem_euclid(3) == 0;
                    if allowed {
                        total += coeff[(r, col)].norm();
                    } else {
                        assert!(coeff[(r, col)].norm() < 1e-10, "n={n} ({r},{col})");
                    }
                }
            }
        }
        assert!(total > 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prop_symmetric_functions(a1 in 0.3f64..3.0, re in -2.0f64..2.0, im in -2.0f64..2.0, theta in 0.0f64..std::f64::consts::TAU) {
        let p = c(re, im);
        prop_assume!(p.norm() > 0.05);
        let m = MetricProfile::new(a1, p).unwrap();
        let lam = Complex64::from_polar(1.0, theta);
        let d = build_d(&m, lam).unwrap();
        let Ok(s) = eigen(&d, m.beta, m.psi) else { return Ok(()); };
        let scale = 1.0 + m.beta.powf(1.5);
        for r in relations(m.beta, twist(lam, p), &s) {
            prop_assert!(r < 1e-10 * scale);
        }
        prop_assert!(max_abs(&(s.l.adjoint() * s.l - CMatrix3::identity())) < 1e-10);
    }
}
