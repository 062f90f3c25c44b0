//! The conformal factor `w(y) = e^{u(y)}` of a translationally equivariant surface.

use num_complex::Complex64;

use crate::elliptic::EllipticParams;
use crate::error::{finite, finite_c};
use crate::{c64, DegenerateKind, Error, Result};

const FLAT_RELATIVE: f64 = 1e-13;

/// `β = 2a₁ + |ψ|²/a₁²`.
pub fn beta_from_a1(a1: f64, psi: Complex64) -> Result<f64> {
    let a1 = finite("a1", a1)?;
    let psi = finite_c("psi", psi)?;
    if a1 <= 0.0 {
        return Err(Error::NonPositiveA1 { a1 });
    }
    Ok(2.0 * a1 + psi.norm_sqr() / (a1 * a1))
}

/// Metric values at a real `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricValue {
    pub w: f64,
    pub dw: f64,
    pub d2w: f64,
    pub u: f64,
    pub du: f64,
    pub d2u: f64,
}

impl MetricValue {
    fn from_w(w: f64, dw: f64, d2w: f64) -> Self {
        let du = dw / w;
        MetricValue { w, dw, d2w, u: w.ln(), du, d2u: d2w / w - du * du }
    }
}

/// Residuals of the Gauss equation and of its first integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussResiduals {
    /// `¼u″ + e^u − |ψ|²e^{−2u}`.
    pub ode: f64,
    /// `2e^u + |ψ|²e^{−2u} + ¼(u′)² − β`.
    pub first_integral: f64,
}

/// Solution of the Gauss equation with `u′(0) = 0` and `e^{u(0)} = a₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricProfile {
    pub psi: Complex64,
    pub a1: f64,
    pub beta: f64,
    pub elliptic: EllipticParams,
    pub kind: DegenerateKind,
    /// The other critical value of `w`, attained at `y = ω`.
    pub a2: f64,
    // w(y) = β/6 − ℘(y − offset)/2.
    offset: Complex64,
}

impl MetricProfile {
    pub fn new(a1: f64, psi: Complex64) -> Result<Self> {
        let beta = beta_from_a1(a1, psi)?;
        let p = psi.norm_sqr();
        let t = a1 * a1 * a1;
        let g2 = 4.0 * beta * beta / 3.0;
        let g3 = 16.0 * p - 8.0 * beta.powi(3) / 27.0;
        let c = beta / 3.0;
        let kind = if p == 0.0 {
            DegenerateKind::PsiZero
        } else if (t - p).abs() <= FLAT_RELATIVE * t.max(p) {
            DegenerateKind::Flat
        } else {
            DegenerateKind::Generic
        };
        // Roots of 8w³ − 4βw² + 4|ψ|² are a₁ and w±; each maps to a root of 4v³ − g₂v − g₃ by v = β/3 − 2w.
        let s = p / (a1 * a1);
        let disc = (s * s + 8.0 * p / a1).sqrt();
        let w_plus = (s + disc) / 4.0;
        let w_minus = (s - disc) / 4.0;
        let (elliptic, a2, offset) = match kind {
            DegenerateKind::PsiZero => (EllipticParams::from_roots(g2, g3, 0.0, [c, c, -2.0 * c], kind)?, 0.0, c64(0.0, 0.0)),
            DegenerateKind::Flat => (EllipticParams::from_roots(g2, g3, 0.0, [2.0 * c, -c, -c], kind)?, a1, c64(0.0, 0.0)),
            DegenerateKind::Generic => {
                let delta = 256.0 * p * (t - p).powi(2) * (8.0 * t + p) / (t * t);
                let (high, low) = if a1 > w_plus { (a1, w_plus) } else { (w_plus, a1) };
                let roots = [c - 2.0 * w_minus, c - 2.0 * low, c - 2.0 * high];
                let e = EllipticParams::from_roots(g2, g3, delta, roots, kind)?;
                let (a2, offset) = if a1 > w_plus { (w_plus, e.omega_prime) } else { (w_plus, e.omega_sum()) };
                (e, a2, offset)
            }
        };
        Ok(MetricProfile { psi, a1, beta, elliptic, kind, a2, offset })
    }

    pub fn psi_abs2(&self) -> f64 {
        self.psi.norm_sqr()
    }

    /// Half-period of the metric; `w` has period `2ω` in `y`. Infinite for `PsiZero`.
    pub fn omega(&self) -> f64 {
        self.elliptic.omega
    }

    /// True when `w(0)` is the maximum of the metric.
    pub fn starts_at_maximum(&self) -> bool {
        self.kind != DegenerateKind::Generic || self.a1 >= self.a2
    }

    pub fn eval(&self, y: f64) -> Result<MetricValue> {
        let y = finite("y", y)?;
        let beta = self.beta;
        Ok(match self.kind {
            DegenerateKind::Flat => MetricValue::from_w(self.a1, 0.0, 0.0),
            DegenerateKind::PsiZero => {
                let k = beta.sqrt();
                let sech2 = 1.0 / (k * y).cosh().powi(2);
                let tanh = (k * y).tanh();
                MetricValue::from_w(
                    0.5 * beta * sech2,
                    -beta * k * sech2 * tanh,
                    -beta * k * k * (sech2 * sech2 - 2.0 * sech2 * tanh * tanh),
                )
            }
            DegenerateKind::Generic => {
                let v = self.elliptic.eval(c64(y, 0.0) - self.offset)?;
                let wp = v.wp.re;
                let wpp = 6.0 * wp * wp - self.elliptic.g2 / 2.0;
                MetricValue::from_w(beta / 6.0 - wp / 2.0, -v.wp_prime.re / 2.0, -wpp / 2.0)
            }
        })
    }

    pub fn check_gauss(&self, y: f64) -> Result<GaussResiduals> {
        let m = self.eval(y)?;
        let p = self.psi_abs2();
        let em2u = 1.0 / (m.w * m.w);
        Ok(GaussResiduals { ode: 0.25 * m.d2u + m.w - p * em2u, first_integral: 2.0 * m.w + p * em2u + 0.25 * m.du * m.du - self.beta })
    }
}

pub fn eval(profile: &MetricProfile, y: f64) -> Result<MetricValue> {
    profile.eval(y)
}

pub fn check_gauss(profile: &MetricProfile, y: f64) -> Result<GaussResiduals> {
    profile.check_gauss(y)
}
