//! Explicit Iwasawa factors: `Q = Q₀Q̃` with `QDQ⁻¹ = Ω`, the scalar integrals `β₁`, `β₂`,
//! the extended frame `𝔽 = exp(zD − β₁D − β₂L₀)Q⁻¹` and the plus-loop `U₊`.

use num_complex::Complex64;

use crate::elliptic::EllipticParams;
use crate::linalg::{diag, spectral_sum, CMatrix3};
use crate::metric::MetricProfile;
use crate::quadrature::{self, Tolerance};
use crate::spectral::{twist, SpectralData};
use crate::{c64, cubic, DegenerateKind, Error, Result};

/// Below this `|Im(λ⁻³ψ)|` the twist is treated as real.
pub const REAL_TWIST_THRESHOLD: f64 = 1e-10;
const BRANCH_THRESHOLD: f64 = 1e-10;
const ROOT_COLLISION: f64 = 1e-10;

fn integral_tolerance() -> Tolerance {
    Tolerance { abs: 1e-12, rel: 1e-13, max_intervals: 2000 }
}

/// The seven scalar entries of `Q̌`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckQ {
    pub p: Complex64,
    pub q: Complex64,
    pub s: Complex64,
    pub t: Complex64,
    pub v1: Complex64,
    pub v2: Complex64,
    pub c: Complex64,
}

impl CheckQ {
    pub fn matrix(&self) -> CMatrix3 {
        let o = c64(0.0, 0.0);
        CMatrix3::new(self.p, self.q, self.v1, self.s, self.t, self.v2, o, o, self.c)
    }
}

/// `Q₀`, `Q̃` and the normalising scalar `κ` at one `(y, λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QFactor {
    pub y: f64,
    pub lambda: Complex64,
    pub q0: CMatrix3,
    pub qtilde: CMatrix3,
    pub kappa: Complex64,
    pub check: CheckQ,
}

impl QFactor {
    pub fn q(&self) -> CMatrix3 {
        self.q0 * self.qtilde
    }

    pub fn q_inverse(&self) -> Result<CMatrix3> {
        self.q().try_inverse().ok_or(Error::BranchPoint { lambda: self.lambda, y: self.y, modulus: 0.0 })
    }
}

/// All factors needed for the frame at height `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct IwasawaFactors {
    pub q: QFactor,
    pub beta1: Complex64,
    pub beta2: Complex64,
}

impl IwasawaFactors {
    pub fn y(&self) -> f64 {
        self.q.y
    }
}

/// `Q = Q₀Q̃` at `(y, λ)`.
pub fn q_factor(profile: &MetricProfile, lambda: Complex64, y: f64) -> Result<QFactor> {
    let m = profile.eval(y)?;
    let (eu, up) = (m.w, m.du);
    let i = c64(0.0, 1.0);
    let a = i * profile.a1.sqrt();
    let a2 = a.norm_sqr();
    let l3 = lambda * lambda * lambda;
    let psi = profile.psi;
    let psib = psi.conj();
    let twisted = psi / l3;
    let s0 = l3 * psib - twisted;
    let c = s0 - eu * up;
    for base in [s0, c] {
        if base.norm() < BRANCH_THRESHOLD {
            return Err(Error::BranchPoint { lambda, y, modulus: base.norm() });
        }
    }
    let gap = a2 - eu;
    let check = CheckQ {
        p: -a2 * up / 2.0 + l3 * psib * a2 / eu - twisted,
        q: a / (lambda * lambda * a.conj()) * (up / 2.0 * a2 - l3 * psib / eu * gap),
        s: lambda * lambda / (a * a) * (a2 * up / 2.0 * eu + twisted * gap),
        t: (-a2 * up / 2.0 * eu + l3 * psib * eu - twisted * a2) / a2,
        v1: -2.0 * i / lambda * a * gap,
        v2: -2.0 * i * lambda / a * eu * gap,
        c,
    };
    // (λ⁶ψ̄ − ψ − λ³e^u u′)^{2/3}(λ⁶ψ̄ − ψ)^{1/3} = λ³ s₀ (č/s₀)^{2/3}; on the unit circle
    // Re(č/s₀) = 1, so the principal power is continuous in y.
    let kappa = l3 * s0 * (c / s0).powf(2.0 / 3.0);
    let qtilde = check.matrix() * (l3 / kappa);
    let half = eu.sqrt();
    let q0 = diag([i / a * half, -i * a / half, c64(1.0, 0.0)]);
    Ok(QFactor { y, lambda, q0, qtilde, kappa, check })
}

/// `Ω(y, λ)`, the Maurer–Cartan form of the frame along `x`.
pub fn omega_matrix(profile: &MetricProfile, lambda: Complex64, y: f64) -> Result<CMatrix3> {
    let (u, v) = maurer_cartan(profile, lambda, y)?;
    Ok(u + v)
}

/// `(U, V)` with `U = λ⁻¹U₋₁ + U₀`, `V = λV₁ + V₀`, so that `𝔽⁻¹𝔽ₓ = U + V` and
/// `𝔽⁻¹𝔽_y = i(U − V)`.
pub fn maurer_cartan(profile: &MetricProfile, lambda: Complex64, y: f64) -> Result<(CMatrix3, CMatrix3)> {
    let m = profile.eval(y)?;
    let i = c64(0.0, 1.0);
    let o = c64(0.0, 0.0);
    let half = m.w.sqrt();
    let inv = 1.0 / m.w;
    let psi = profile.psi;
    let diag_term = -i * m.du / 4.0;
    let li = lambda.inv();
    #[rustfmt::skip]
    let u = CMatrix3::new(
        diag_term,          o,          li * i * half,
        -li * i * psi * inv, -diag_term, o,
        o,                  li * i * half, o,
    );
    #[rustfmt::skip]
    let v = CMatrix3::new(
        diag_term, -lambda * i * psi.conj() * inv, o,
        o,         -diag_term,                     lambda * i * half,
        lambda * i * half, o,                      o,
    );
    Ok((u, v))
}

fn real_twist_guard(profile: &MetricProfile, lambda: Complex64) -> Result<Complex64> {
    let m = twist(lambda, profile.psi);
    if m.im.abs() < REAL_TWIST_THRESHOLD {
        return Err(Error::SingularIntegrand { lambda, im_twist: m.im });
    }
    Ok(m)
}

/// `(β₁(y, λ), β₂(y, λ))` by adaptive quadrature, split at multiples of `ω`.
pub fn beta_integrals(profile: &MetricProfile, lambda: Complex64, y: f64) -> Result<(Complex64, Complex64)> {
    if y == 0.0 {
        return Ok((c64(0.0, 0.0), c64(0.0, 0.0)));
    }
    real_twist_guard(profile, lambda)?;
    let l3 = lambda * lambda * lambda;
    let psib = profile.psi.conj();
    let s0 = l3 * psib - profile.psi / l3;
    let i = c64(0.0, 1.0);
    let knots = quadrature::knots_at_multiples(y, profile.omega());
    let tol = integral_tolerance();
    let mut failure = None;
    let mut integrand = |f: &dyn Fn(f64, f64) -> Complex64| {
        let mut inner = |s: f64| match profile.eval(s) {
            Ok(m) => f(m.w, m.dw),
            Err(e) => {
                failure.get_or_insert(e);
                c64(f64::NAN, 0.0)
            }
        };
        quadrature::integrate_piecewise(&mut inner, &knots, tol).map(|e| e.value)
    };
    let b1 = integrand(&|_, dw| (2.0 * i * l3 * psib - i * dw) / (s0 - dw));
    let b2 = integrand(&|w, dw| 2.0 * w / (s0 - dw));
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((b1?, b2?))
}

/// Roots of the twist-shifted cubic `4v³ − g₂v − g̃₃` and the period integrals attached to them.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedCubic {
    /// `g̃₃ = g₃ − 16 Im(λ⁻³ψ)²`.
    pub g3_shifted: f64,
    /// Descending roots `ẽ_j`.
    pub roots: [f64; 3],
    /// `H̃_j² = Π_{k≠j}(ẽ_j − ẽ_k)`.
    pub h2: [f64; 3],
    /// `α_j` with `℘(α_j) = ẽ_j`.
    pub alpha: [Complex64; 3],
    /// `∫₀^{2ω} dy / (℘(y − ω′) − ẽ_j) = (4ωζ(α_j) − 4α_jη)/℘′(α_j)`.
    pub integrals: [Complex64; 3],
}

/// `(4ωζ(α) − 4αη)/℘′(α)` for `α = ℘⁻¹(v)`.
pub fn period_integral(elliptic: &EllipticParams, v: f64) -> Result<(Complex64, Complex64)> {
    let alpha = elliptic.invert(v)?;
    let vals = elliptic.eval(alpha)?;
    let value = (vals.zeta * (4.0 * elliptic.omega) - alpha * (4.0 * elliptic.eta)) / vals.wp_prime;
    Ok((alpha, value))
}

pub fn shifted_cubic(profile: &MetricProfile, lambda: Complex64) -> Result<ShiftedCubic> {
    if profile.kind != DegenerateKind::Generic {
        return Err(Error::NeedsGeneric { kind: profile.kind });
    }
    let m = twist(lambda, profile.psi);
    let e = &profile.elliptic;
    let g3_shifted = e.g3 - 16.0 * m.im * m.im;
    let delta = e.g2.powi(3) - 27.0 * g3_shifted * g3_shifted;
    let roots = cubic::real_roots_no_quadratic(4.0, -e.g2, -g3_shifted).ok_or(Error::ComplexRoots { delta })?;
    for (x, y) in [(roots[0], roots[1]), (roots[1], roots[2])] {
        if (x - y).abs() < ROOT_COLLISION {
            return Err(Error::RootCollision { first: x, second: y, gap: (x - y).abs() });
        }
    }
    let mut h2 = [0.0; 3];
    let mut alpha = [c64(0.0, 0.0); 3];
    let mut integrals = [c64(0.0, 0.0); 3];
    for j in 0..3 {
        h2[j] = (0..3).filter(|&k| k != j).map(|k| roots[j] - roots[k]).product();
        let (a, value) = period_integral(e, roots[j])?;
        alpha[j] = a;
        integrals[j] = value;
    }
    Ok(ShiftedCubic { g3_shifted, roots, h2, alpha, integrals })
}

/// `(β₁(2ω), β₂(2ω))` from the elliptic closed forms; `(2ωi, 0)` for a real twist.
pub fn beta_closed_2omega(profile: &MetricProfile, lambda: Complex64) -> Result<(Complex64, Complex64)> {
    let m = twist(lambda, profile.psi);
    let two_omega = 2.0 * profile.omega();
    if m.im.abs() < REAL_TWIST_THRESHOLD {
        return Ok((c64(0.0, two_omega), c64(0.0, 0.0)));
    }
    let sc = shifted_cubic(profile, lambda)?;
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    for j in 0..3 {
        let integral = sc.integrals[j].re;
        s1 += integral / sc.h2[j];
        s2 += (profile.beta / 3.0 - sc.roots[j]) / (2.0 * sc.h2[j]) * integral;
    }
    Ok((c64(-4.0 * m.im * m.re * s1, two_omega), c64(0.0, 4.0 * m.im * s2)))
}

/// All factors at `(y, λ)`, with the `β` integrals by quadrature.
pub fn factors(profile: &MetricProfile, lambda: Complex64, y: f64) -> Result<IwasawaFactors> {
    let q = q_factor(profile, lambda, y)?;
    let (beta1, beta2) = beta_integrals(profile, lambda, y)?;
    Ok(IwasawaFactors { q, beta1, beta2 })
}

fn check_height(factors: &IwasawaFactors, y: f64) -> Result<()> {
    if (factors.y() - y).abs() > 1e-12 * (1.0 + y.abs()) {
        return Err(Error::SampleMismatch { expected: factors.y(), got: y });
    }
    Ok(())
}

/// `exp(zD − β₁D − β₂L₀)` through the eigenbasis of `D`.
pub fn frame_exponential(profile: &MetricProfile, spectral: &SpectralData, factors: &IwasawaFactors, z: Complex64) -> CMatrix3 {
    let i = c64(0.0, 1.0);
    let values = spectral.d.map(|d| (i * (z - factors.beta1) * d + factors.beta2 * (d * d - 2.0 * profile.beta / 3.0)).exp());
    spectral_sum(&spectral.l, values)
}

/// `𝔽(z, λ) = exp(zD − β₁D − β₂L₀) Q⁻¹`.
pub fn extended_frame(profile: &MetricProfile, spectral: &SpectralData, factors: &IwasawaFactors, z: Complex64) -> Result<CMatrix3> {
    check_height(factors, z.im)?;
    Ok(frame_exponential(profile, spectral, factors, z) * factors.q.q_inverse()?)
}

/// `U₊(y, λ) = Q exp(β₁D + β₂L₀)`.
pub fn plus_factor(profile: &MetricProfile, spectral: &SpectralData, factors: &IwasawaFactors) -> CMatrix3 {
    let i = c64(0.0, 1.0);
    let values = spectral.d.map(|d| (i * factors.beta1 * d - factors.beta2 * (d * d - 2.0 * profile.beta / 3.0)).exp());
    factors.q.q() * spectral_sum(&spectral.l, values)
}
