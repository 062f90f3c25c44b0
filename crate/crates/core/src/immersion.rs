//! Horizontal lifts, surface diagnostics, monodromy and closing conditions.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::iwasawa::{self, IwasawaFactors, REAL_TWIST_THRESHOLD};
use crate::linalg::{hermitian, max_abs, CMatrix3, CVector3};
use crate::metric::MetricProfile;
use crate::quadrature::{self, Tolerance};
use crate::spectral::{build_d, eigen, twist, LoopMatrixD, SpectralData};
use crate::{c64, DegenerateKind, Error, Result};

fn e3() -> CVector3 {
    CVector3::new(c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0))
}

/// `F = Σ_j exp{izd_j − iβ₁d_j + β₂(d_j² − 2β/3)} ⟨Q⁻¹e₃, l_j⟩ l_j`.
pub fn lift_loop(profile: &MetricProfile, spectral: &SpectralData, factors: &IwasawaFactors, z: Complex64) -> Result<CVector3> {
    if (factors.y() - z.im).abs() > 1e-12 * (1.0 + z.im.abs()) {
        return Err(Error::SampleMismatch { expected: factors.y(), got: z.im });
    }
    let q3 = factors.q.q_inverse()? * e3();
    let i = c64(0.0, 1.0);
    let mut f = CVector3::zeros();
    for (j, d) in spectral.d.iter().enumerate() {
        let l = spectral.column(j);
        let phase = (i * (z - factors.beta1) * *d + factors.beta2 * (d * d - 2.0 * profile.beta / 3.0)).exp();
        f += l * (phase * hermitian(&q3, &l));
    }
    Ok(f)
}

/// Amplitudes and phases of the explicit lift at height `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftCoefficients {
    pub y: f64,
    pub h: [f64; 3],
    pub g: [f64; 3],
    pub d: [f64; 3],
    pub l_hat: CMatrix3,
}

/// `h_j(y)² = (d_j e^u − Re(λ⁻³ψ))/(d_j³ − Re(λ⁻³ψ))`, written through `d_j³ = βd_j − 2Re(λ⁻³ψ)`
/// as `(d_j² + 2e^u − β)/(3d_j² − β)` so that `d_j = 0` is harmless.
pub fn amplitudes(profile: &MetricProfile, spectral: &SpectralData, w: f64) -> [f64; 3] {
    spectral.d.map(|d| ((d * d + 2.0 * w - profile.beta) / (3.0 * d * d - profile.beta)).max(0.0).sqrt())
}

/// `G_j(y) = ∫₀^y d_j Im(λ⁻³ψ)/(d_j e^u − Re(λ⁻³ψ)) ds`, one quadrature per `j`.
pub fn phase_integrals(profile: &MetricProfile, spectral: &SpectralData, lambda: Complex64, y: f64) -> Result<[f64; 3]> {
    let m = twist(lambda, profile.psi);
    let mut out = [0.0; 3];
    if y == 0.0 || m.im == 0.0 {
        return Ok(out);
    }
    let knots = quadrature::knots_at_multiples(y, profile.omega());
    let tol = Tolerance { abs: 1e-12, rel: 1e-13, max_intervals: 2000 };
    for (slot, d) in out.iter_mut().zip(spectral.d) {
        let mut failure = None;
        let est = quadrature::integrate_piecewise(
            |s| match profile.eval(s) {
                Ok(v) => c64(2.0 * m.im / (2.0 * v.w - profile.beta + d * d), 0.0),
                Err(e) => {
                    failure.get_or_insert(e);
                    c64(f64::NAN, 0.0)
                }
            },
            &knots,
            tol,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        *slot = est?.value.re;
    }
    Ok(out)
}

pub fn lift_coefficients(profile: &MetricProfile, spectral: &SpectralData, lambda: Complex64, y: f64) -> Result<LiftCoefficients> {
    let w = profile.eval(y)?.w;
    Ok(LiftCoefficients {
        y,
        h: amplitudes(profile, spectral, w),
        g: phase_integrals(profile, spectral, lambda, y)?,
        d: spectral.d,
        l_hat: spectral.l,
    })
}

/// Signed amplitudes of the real-twist form: `ε_j(β/3 − e_j)√((e_j − ℘)/(12|ψ|² − β(β/3 − e_j)²))`
/// with `e_j = d_j² − 2β/3`, `ε = −1` on the largest `e_j` and `+1` otherwise.
///
/// An amplitude that vanishes at the extrema of the metric is continued analytically through its
/// zeros, so it changes sign at every `y ∈ ωℤ` where it vanishes.
pub fn real_amplitudes(profile: &MetricProfile, spectral: &SpectralData, y: f64) -> Result<[f64; 3]> {
    let beta = profile.beta;
    let p = profile.psi_abs2();
    let v = profile.eval(y)?;
    let w = v.w;
    let d = spectral.d;
    let e = d.map(|d| d * d - 2.0 * beta / 3.0);
    let top = (0..3).max_by(|&a, &b| e[a].total_cmp(&e[b])).unwrap_or(0);
    let h = amplitudes(profile, spectral, w);
    let wp = beta / 3.0 - 2.0 * w;
    let mut out = [0.0; 3];
    for j in 0..3 {
        let eps = if j == top { -1.0 } else { 1.0 };
        let shift = beta / 3.0 - e[j];
        let denom = 12.0 * p - beta * shift * shift;
        out[j] = if p > 0.0 && denom.abs() > 1e-12 {
            eps * shift * ((e[j] - wp) / denom).max(0.0).sqrt()
        } else {
            let sign = if shift < 0.0 { -1.0 } else { 1.0 };
            eps * sign * h[j]
        };
    }
    // h_j vanishes where w = (β − d_j²)/2. Near such a level the direct formula is the square root
    // of a cancellation, so use w′² = −8Π(w − level) instead, and flip the sign across each zero.
    let level = d.map(|d| (beta - d * d) / 2.0);
    let nearest = |target: f64| (0..3).min_by(|&a, &b| (level[a] - target).abs().total_cmp(&(level[b] - target).abs())).unwrap_or(0);
    let omega = profile.omega();
    let scale = 1.0 + beta.abs();
    let mut fix = |j: usize, flip: bool| {
        let (k, l) = ((j + 1) % 3, (j + 2) % 3);
        let rest = -4.0 * (w - level[k]) * (w - level[l]) * (3.0 * d[j] * d[j] - beta);
        let own = (w - level[j]).abs();
        if own < (w - level[k]).abs() && own < (w - level[l]).abs() && rest > 0.0 {
            let sign = if out[j] < 0.0 { -1.0 } else { 1.0 };
            out[j] = sign * v.dw.abs() / rest.sqrt();
        }
        if flip {
            out[j] = -out[j];
        }
    };
    let at_origin = nearest(profile.a1);
    if (level[at_origin] - profile.a1).abs() < 1e-8 * scale {
        let phase = if omega.is_finite() { (PI * y / (2.0 * omega)).sin() } else { y };
        fix(at_origin, phase < 0.0);
    }
    if omega.is_finite() {
        let w_far = profile.eval(omega)?.w;
        let at_far = nearest(w_far);
        if at_far != at_origin && (level[at_far] - w_far).abs() < 1e-8 * scale {
            fix(at_far, (PI * y / (2.0 * omega)).cos() < 0.0);
        }
    }
    Ok(out)
}

/// The lift written as `Σ_j h_j(y) e^{i(d_j x + G_j(y))} l_j`; the non-real form needs `Im(λ⁻³ψ) ≠ 0`, the real form needs it zero.
pub fn lift_amplitude_phase(
    profile: &MetricProfile,
    spectral: &SpectralData,
    lambda: Complex64,
    z: Complex64,
    real_form: bool,
) -> Result<CVector3> {
    let m = twist(lambda, profile.psi);
    let is_real = m.im.abs() < REAL_TWIST_THRESHOLD;
    if is_real != real_form {
        return Err(Error::BranchMismatch { requested: if real_form { "real" } else { "non-real" }, im_twist: m.im });
    }
    let w = profile.eval(z.im)?.w;
    let (amp, g) = if real_form {
        (real_amplitudes(profile, spectral, z.im)?, [0.0; 3])
    } else {
        (amplitudes(profile, spectral, w), phase_integrals(profile, spectral, lambda, z.im)?)
    };
    let mut f = CVector3::zeros();
    for j in 0..3 {
        f += spectral.column(j) * (Complex64::from_polar(amp[j], spectral.d[j] * z.re + g[j]));
    }
    Ok(f)
}

/// How a [`Surface`] evaluates its lift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftPath {
    /// Explicit Iwasawa factors.
    Loop,
    /// Real-twist amplitude form (also used for `ψ = 0`).
    RealTwist,
    /// Constant metric: `𝔽 = exp(zλ⁻¹D₋₁ + z̄λD₁)`.
    Vacuum,
}

/// A surface at one fixed `λ`, dispatching to the appropriate lift.
#[derive(Debug, Clone)]
pub struct Surface {
    pub profile: MetricProfile,
    pub lambda: Complex64,
    pub d: LoopMatrixD,
    pub spectral: Option<SpectralData>,
    pub path: LiftPath,
}

/// One evaluated point of the surface.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSample {
    pub z: Complex64,
    pub lambda: Complex64,
    pub frame: Option<CMatrix3>,
    pub lift: CVector3,
    pub factors: Option<IwasawaFactors>,
}

impl Surface {
    pub fn new(profile: MetricProfile, lambda: Complex64) -> Result<Self> {
        let d = build_d(&profile, lambda)?;
        let modulus = lambda.norm();
        if (modulus - 1.0).abs() > 1e-12 {
            return Err(Error::OffUnitCircle { modulus });
        }
        let m = twist(lambda, profile.psi);
        let (path, spectral) = if profile.kind == DegenerateKind::Flat {
            (LiftPath::Vacuum, eigen(&d, profile.beta, profile.psi).ok())
        } else {
            let s = eigen(&d, profile.beta, profile.psi)?;
            let path = if profile.kind == DegenerateKind::PsiZero || m.im.abs() < REAL_TWIST_THRESHOLD {
                LiftPath::RealTwist
            } else {
                LiftPath::Loop
            };
            (path, Some(s))
        };
        Ok(Surface { profile, lambda, d, spectral, path })
    }

    pub fn spectral(&self) -> Result<&SpectralData> {
        self.spectral.as_ref().ok_or(Error::DegenerateSpectrum { lambda: self.lambda, gap: 0.0 })
    }

    fn vacuum_frame(&self, z: Complex64) -> CMatrix3 {
        let (minus, plus) = split_potential(&self.d);
        (minus * (z / self.lambda) + plus * (z.conj() * self.lambda)).exp()
    }

    pub fn sample(&self, z: Complex64) -> Result<FrameSample> {
        let (frame, lift, factors) = match self.path {
            LiftPath::Vacuum => {
                let frame = self.vacuum_frame(z);
                let lift = frame.column(2).into_owned();
                (Some(frame), lift, None)
            }
            LiftPath::RealTwist => {
                let lift = lift_amplitude_phase(&self.profile, self.spectral()?, self.lambda, z, true)?;
                (None, lift, None)
            }
            LiftPath::Loop => {
                let spectral = self.spectral()?;
                let factors = iwasawa::factors(&self.profile, self.lambda, z.im)?;
                let frame = iwasawa::extended_frame(&self.profile, spectral, &factors, z)?;
                let lift = lift_loop(&self.profile, spectral, &factors, z)?;
                (Some(frame), lift, Some(factors))
            }
        };
        Ok(FrameSample { z, lambda: self.lambda, frame, lift, factors })
    }

    pub fn lift(&self, z: Complex64) -> Result<CVector3> {
        match self.path {
            LiftPath::Vacuum => Ok(self.vacuum_frame(z).column(2).into_owned()),
            LiftPath::RealTwist => lift_amplitude_phase(&self.profile, self.spectral()?, self.lambda, z, true),
            LiftPath::Loop => {
                let factors = iwasawa::factors(&self.profile, self.lambda, z.im)?;
                lift_loop(&self.profile, self.spectral()?, &factors, z)
            }
        }
    }

    /// Lift along the line `Im z = y`, building the factors at that height once.
    pub fn lift_row(&self, y: f64, xs: &[f64]) -> Result<Vec<CVector3>> {
        match self.path {
            LiftPath::Loop => {
                let spectral = self.spectral()?;
                let factors = iwasawa::factors(&self.profile, self.lambda, y)?;
                xs.iter().map(|&x| lift_loop(&self.profile, spectral, &factors, c64(x, y))).collect()
            }
            _ => xs.iter().map(|&x| self.lift(c64(x, y))).collect(),
        }
    }

    /// The Hopf coefficient `F_zz · conj(F_z̄)` that this lift carries: `−iλ⁻³ψ`.
    pub fn expected_hopf(&self) -> Complex64 {
        c64(0.0, -1.0) * twist(self.lambda, self.profile.psi)
    }
}

/// `D = λ⁻¹D₋₁ + λD₁` split into its two coefficient matrices (each taken at `λ = 1`).
pub fn split_potential(d: &LoopMatrixD) -> (CMatrix3, CMatrix3) {
    let e = &d.entries;
    let lam = d.lambda;
    let mut minus = CMatrix3::zeros();
    let mut plus = CMatrix3::zeros();
    for (r, c) in [(0, 2), (1, 0), (2, 1)] {
        minus[(r, c)] = e[(r, c)] * lam;
    }
    for (r, c) in [(0, 1), (1, 2), (2, 0)] {
        plus[(r, c)] = e[(r, c)] / lam;
    }
    (minus, plus)
}

/// Finite-difference steps for the geometric diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdSteps {
    pub first: f64,
    pub second: f64,
}

impl Default for FdSteps {
    fn default() -> Self {
        FdSteps { first: 1e-4, second: 1e-3 }
    }
}

/// Worst-case geometric residuals over a set of sample points.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GeometryReport {
    /// `||F| − 1|`.
    pub unit_norm: f64,
    /// `|F_z·F̄|`, `|F_z̄·F̄|`.
    pub horizontality: f64,
    /// `|F_z·conj(F_z̄)|` and the mismatch between `|F_z|²` and `|F_z̄|²`.
    pub conformality: f64,
    /// `||F_z|² − e^u|`.
    pub metric: f64,
    /// `|F_zz·conj(F_z̄) − ψ_expected|`.
    pub hopf: f64,
    pub points: usize,
}

impl GeometryReport {
    fn absorb(&mut self, other: &GeometryReport) {
        self.unit_norm = self.unit_norm.max(other.unit_norm);
        self.horizontality = self.horizontality.max(other.horizontality);
        self.conformality = self.conformality.max(other.conformality);
        self.metric = self.metric.max(other.metric);
        self.hopf = self.hopf.max(other.hopf);
        self.points += other.points;
    }
}

/// Recover the metric and Hopf coefficient from a lift by Richardson-extrapolated central
/// differences, and compare with `profile` and `expected_hopf`.
pub fn hopf_and_metric_check<F>(
    lift: F,
    profile: &MetricProfile,
    expected_hopf: Complex64,
    points: &[Complex64],
    steps: FdSteps,
) -> Result<GeometryReport>
where
    F: Fn(Complex64) -> Result<CVector3>,
{
    let mut report = GeometryReport::default();
    let i = c64(0.0, 1.0);
    for &z in points {
        let f0 = lift(z)?;
        let h = steps.first;
        let central = |dir: Complex64, h: f64| -> Result<CVector3> { Ok((lift(z + dir * h)? - lift(z - dir * h)?) / c64(2.0 * h, 0.0)) };
        let richardson = |coarse: CVector3, fine: CVector3| (fine * c64(4.0, 0.0) - coarse) / c64(3.0, 0.0);
        let fx = richardson(central(c64(1.0, 0.0), h)?, central(c64(1.0, 0.0), h / 2.0)?);
        let fy = richardson(central(i, h)?, central(i, h / 2.0)?);
        let k = steps.second;
        let second = |dir: Complex64, h: f64| -> Result<CVector3> {
            Ok((lift(z + dir * h)? - f0 * c64(2.0, 0.0) + lift(z - dir * h)?) / c64(h * h, 0.0))
        };
        let mixed = |h: f64| -> Result<CVector3> {
            let a = lift(z + c64(h, h))?;
            let b = lift(z + c64(h, -h))?;
            let c = lift(z + c64(-h, h))?;
            let d = lift(z + c64(-h, -h))?;
            Ok((a - b - c + d) / c64(4.0 * h * h, 0.0))
        };
        let fxx = richardson(second(c64(1.0, 0.0), k)?, second(c64(1.0, 0.0), k / 2.0)?);
        let fyy = richardson(second(i, k)?, second(i, k / 2.0)?);
        let fxy = richardson(mixed(k)?, mixed(k / 2.0)?);
        let half = c64(0.5, 0.0);
        let fz = (fx - fy * i) * half;
        let fzb = (fx + fy * i) * half;
        let fzz = (fxx - fxy * (2.0 * i) - fyy) * c64(0.25, 0.0);
        let w = profile.eval(z.im)?.w;
        let nz = hermitian(&fz, &fz).re;
        let nzb = hermitian(&fzb, &fzb).re;
        report.absorb(&GeometryReport {
            unit_norm: (f0.norm() - 1.0).abs(),
            horizontality: hermitian(&fz, &f0).norm().max(hermitian(&fzb, &f0).norm()),
            conformality: hermitian(&fz, &fzb).norm().max((nz - nzb).abs()),
            metric: (nz - w).abs().max((nzb - w).abs()),
            hopf: (hermitian(&fzz, &fzb) - expected_hopf).norm(),
            points: 1,
        });
    }
    Ok(report)
}

/// `G_j(2ω) + Re β₁(2ω) d_j + Im β₂(2ω)(−d_j² + 2β/3)` for each `j`, from direct quadrature.
pub fn monodromy_vanishing(profile: &MetricProfile, lambda: Complex64) -> Result<[f64; 3]> {
    let id = running_identity(profile, lambda, 2.0 * profile.omega())?;
    Ok(id.lhs.map(|v| v - id.rhs))
}

/// Both sides of `G_j(y) + Re β₁(y) d_j + Im β₂(y)(−d_j² + 2β/3) = ⅓ arctan(w′(y)/(2 Im(λ⁻³ψ)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunningIdentity {
    pub lhs: [f64; 3],
    pub rhs: f64,
}

pub fn running_identity(profile: &MetricProfile, lambda: Complex64, y: f64) -> Result<RunningIdentity> {
    let m = twist(lambda, profile.psi);
    if m.im.abs() < REAL_TWIST_THRESHOLD {
        return Err(Error::SingularIntegrand { lambda, im_twist: m.im });
    }
    let d = build_d(profile, lambda)?;
    let spectral = eigen(&d, profile.beta, profile.psi)?;
    let g = phase_integrals(profile, &spectral, lambda, y)?;
    let (b1, b2) = iwasawa::beta_integrals(profile, lambda, y)?;
    let mut lhs = [0.0; 3];
    for j in 0..3 {
        let dj = spectral.d[j];
        lhs[j] = g[j] + b1.re * dj + b2.im * (-dj * dj + 2.0 * profile.beta / 3.0);
    }
    let dw = profile.eval(y)?.dw;
    Ok(RunningIdentity { lhs, rhs: (dw / (2.0 * m.im)).atan() / 3.0 })
}

/// `G_j(2ω)` from the elliptic closed form `−2 Im(λ⁻³ψ)·(4ωζ(α) − 4αη)/℘′(α)`, with `ẽ` paired
/// to `d_j` by `ẽ = β/3 + d_k d_l`; zero for a real twist.
pub fn g_closed_2omega(profile: &MetricProfile, lambda: Complex64) -> Result<[f64; 3]> {
    let m = twist(lambda, profile.psi);
    if m.im.abs() < REAL_TWIST_THRESHOLD {
        return Ok([0.0; 3]);
    }
    let sc = iwasawa::shifted_cubic(profile, lambda)?;
    let d = build_d(profile, lambda)?;
    let spectral = eigen(&d, profile.beta, profile.psi)?;
    let pairing = pair_shifted_roots(profile.beta, &spectral.d, &sc.roots)?;
    Ok(pairing.map(|k| -2.0 * m.im * sc.integrals[k].re))
}

/// For each `j`, the index of the shifted root equal to `β/3 + d_k d_l` (`{j,k,l} = {1,2,3}`).
pub fn pair_shifted_roots(beta: f64, d: &[f64; 3], roots: &[f64; 3]) -> Result<[usize; 3]> {
    let scale = 1.0 + roots.iter().fold(0.0f64, |a, r| a.max(r.abs()));
    let mut out = [0; 3];
    for j in 0..3 {
        let target = beta / 3.0 + d[(j + 1) % 3] * d[(j + 2) % 3];
        let (k, mismatch) =
            roots.iter().enumerate().map(|(k, r)| (k, (r - target).abs())).min_by(|a, b| a.1.total_cmp(&b.1)).expect("three roots");
        if mismatch > 1e-8 * scale {
            return Err(Error::Pairing { index: j + 1, mismatch });
        }
        out[j] = k;
    }
    Ok(out)
}

/// The Clifford vacuum matrix `A` with eigenvalues `i, iα, iα²`, `α = e^{2πi/3}`.
pub fn clifford_matrix() -> CMatrix3 {
    let i = c64(0.0, 1.0);
    let o = c64(0.0, 0.0);
    CMatrix3::new(o, o, i, i, o, o, o, i, o)
}

/// The twisting involution on the Lie algebra, `τ(X) = −X*`.
pub fn tau(x: &CMatrix3) -> CMatrix3 {
    -x.adjoint()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosingResult {
    pub delta: Complex64,
    /// Scalar value `c` of the monodromy.
    pub c: Complex64,
    pub monodromy: CMatrix3,
    /// `max |M − cI|`.
    pub off_diagonal: f64,
    /// `|c³ − 1|`.
    pub cube_defect: f64,
}

/// `δ = λ₀π[(2l₁ − l₂ − l₃)/3 + i(l₃ − l₂)/√3]` for `l₁ + l₂ + l₃ + 1 + k = 0`.
pub fn closing_period(lambda0: Complex64, l: [i64; 3], k: i64) -> Result<Complex64> {
    if !(0..=2).contains(&k) {
        return Err(Error::InvalidK { k });
    }
    let sum = l[0] + l[1] + l[2] + 1 + k;
    if sum != 0 {
        return Err(Error::ClosingConstraint { sum });
    }
    let [l1, l2, l3] = l.map(|v| v as f64);
    Ok(lambda0 * c64((2.0 * l1 - l2 - l3) / 3.0, (l3 - l2) / 3f64.sqrt()) * PI)
}

/// Solve and verify the Clifford closing conditions: `exp(δλ₀⁻¹A + δ̄λ₀τ(A)) = cI`, `c³ = 1`.
pub fn clifford_closing(lambda0: Complex64, l: [i64; 3], k: i64, tolerance: f64) -> Result<ClosingResult> {
    let modulus = lambda0.norm();
    if (modulus - 1.0).abs() > 1e-12 {
        return Err(Error::OffUnitCircle { modulus });
    }
    let delta = closing_period(lambda0, l, k)?;
    let a = clifford_matrix();
    let monodromy = (a * (delta / lambda0) + tau(&a) * (delta.conj() * lambda0)).exp();
    let c = monodromy.trace() / 3.0;
    let off_diagonal = max_abs(&(monodromy - CMatrix3::identity() * c));
    let cube_defect = (c * c * c - 1.0).norm();
    if off_diagonal > tolerance {
        return Err(Error::NotScalar { mass: off_diagonal });
    }
    Ok(ClosingResult { delta, c, monodromy, off_diagonal, cube_defect })
}

/// Outcome of [`normalize_vacuum`].
#[derive(Debug, Clone, PartialEq)]
pub struct VacuumNormalization {
    pub delta_rot: f64,
    pub scale: Complex64,
    /// The conjugated and rescaled potential matrix.
    pub normalized: CMatrix3,
    /// `max |normalized − A_Clifford|`.
    pub residual: f64,
}

/// The vacuum potential with coefficients `a` (entries (1,3), (3,2)) and `b` (entry (2,1)).
pub fn vacuum_matrix(a: Complex64, b: Complex64) -> CMatrix3 {
    let o = c64(0.0, 0.0);
    CMatrix3::new(o, o, a, b, o, o, o, a, o)
}

/// Conjugate by `diag(e^{iδ}, e^{−iδ}, 1)` and rescale so the vacuum `(a, b)` becomes the
/// Clifford potential. Requires `|a| = |b|` to `1e-10`.
pub fn normalize_vacuum(a: Complex64, b: Complex64) -> Result<VacuumNormalization> {
    let a = crate::error::finite_c("a", a)?;
    let b = crate::error::finite_c("b", b)?;
    let r = a.norm();
    if r == 0.0 {
        return Err(Error::ZeroVacuum);
    }
    if (r - b.norm()).abs() > 1e-10 * r.max(1.0) {
        return Err(Error::NotVacuum { a_abs: r, b_abs: b.norm() });
    }
    let i = c64(0.0, 1.0);
    let theta = (-i * a).arg();
    let beta = (-i * b).arg();
    let delta_rot = (beta - theta) / 3.0;
    let scale = Complex64::from_polar(r, (2.0 * theta + beta) / 3.0);
    let rot = crate::linalg::diag([Complex64::from_polar(1.0, delta_rot), Complex64::from_polar(1.0, -delta_rot), c64(1.0, 0.0)]);
    let normalized = rot * vacuum_matrix(a, b) * rot.adjoint() / scale;
    let residual = max_abs(&(normalized - clifford_matrix()));
    Ok(VacuumNormalization { delta_rot, scale, normalized, residual })
}
