//! The constant potential `D(λ)`, its eigen-decomposition and the second commutant generator.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::finite_c;
use crate::linalg::{cross, normalize_phase, CMatrix3, CVector3};
use crate::metric::MetricProfile;
use crate::{c64, cubic, Error, Result};

/// Minimum eigenvalue separation accepted by [`eigen`].
pub const GAP_THRESHOLD: f64 = 1e-8;
const UNIT_TOLERANCE: f64 = 1e-12;

/// `λ⁻³ψ`, the combination through which `λ` enters every scalar identity.
pub fn twist(lambda: Complex64, psi: Complex64) -> Complex64 {
    psi / (lambda * lambda * lambda)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoopMatrixD {
    pub lambda: Complex64,
    /// `i e^{u(0)/2}`.
    pub a: Complex64,
    /// `−iψ e^{−u(0)}`.
    pub b: Complex64,
    pub entries: CMatrix3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    /// Eigenvalues of `D` are `i·d[j]`; sorted descending.
    pub d: [f64; 3],
    /// Unitary matrix whose columns are the eigenvectors.
    pub l: CMatrix3,
    /// `D² − ⅓ tr(D²) I`.
    pub l0: CMatrix3,
}

impl SpectralData {
    pub fn column(&self, j: usize) -> CVector3 {
        self.l.column(j).into_owned()
    }

    /// Eigenvalues of `L₀`: `−d_j² + 2β/3`.
    pub fn l0_eigenvalues(&self, beta: f64) -> [f64; 3] {
        self.d.map(|d| -d * d + 2.0 * beta / 3.0)
    }
}

/// `D(λ)` for the profile's initial data. Off the unit circle the matrix is still built,
/// but it is no longer skew-Hermitian.
pub fn build_d(profile: &MetricProfile, lambda: Complex64) -> Result<LoopMatrixD> {
    let lambda = finite_c("lambda", lambda)?;
    if lambda.norm() == 0.0 {
        return Err(Error::OffUnitCircle { modulus: 0.0 });
    }
    let i = c64(0.0, 1.0);
    let root = profile.a1.sqrt();
    let inv = 1.0 / profile.a1;
    let psi = profile.psi;
    let li = lambda.inv();
    let zero = c64(0.0, 0.0);
    #[rustfmt::skip]
    let entries = CMatrix3::new(
        zero,                    -i * lambda * psi.conj() * inv, i * li * root,
        -i * li * psi * inv,     zero,                           i * lambda * root,
        i * lambda * root,       i * li * root,                  zero,
    );
    Ok(LoopMatrixD { lambda, a: i * root, b: -i * psi * inv, entries })
}

/// Eigen-data of `D(λ)` for `|λ| = 1`.
pub fn eigen(d: &LoopMatrixD, beta: f64, psi: Complex64) -> Result<SpectralData> {
    let modulus = d.lambda.norm();
    if (modulus - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::OffUnitCircle { modulus });
    }
    let m = twist(d.lambda, psi);
    let roots = cubic::depressed_real_roots(-beta, 2.0 * m.re).ok_or(Error::DegenerateSpectrum { lambda: d.lambda, gap: 0.0 })?;
    let gap = (roots[0] - roots[1]).min(roots[1] - roots[2]);
    if gap < GAP_THRESHOLD {
        return Err(Error::DegenerateSpectrum { lambda: d.lambda, gap });
    }
    let mut l = CMatrix3::zeros();
    for (j, dj) in roots.iter().enumerate() {
        let shifted = d.entries - CMatrix3::identity() * c64(0.0, *dj);
        let rows: Vec<CVector3> = (0..3).map(|r| shifted.row(r).transpose()).collect();
        let v = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(a, b)| cross(&rows[a], &rows[b]))
            .max_by(|x, y| x.norm().total_cmp(&y.norm()))
            .expect("three candidate pairs");
        l.set_column(j, &normalize_phase(&v));
    }
    let d2 = d.entries * d.entries;
    let l0 = d2 - CMatrix3::identity() * (d2.trace() / 3.0);
    Ok(SpectralData { d: roots, l, l0 })
}

/// The six unit-circle `λ` with `Re(λ⁻³ψ) = 0`, where one eigenvalue of `D` vanishes.
pub fn degenerate_lambdas(psi: Complex64) -> Result<[Complex64; 6]> {
    let psi = finite_c("psi", psi)?;
    if psi.norm() == 0.0 {
        return Err(Error::ZeroHopf);
    }
    Ok(circle_points(psi.arg() - PI / 2.0))
}

/// The six unit-circle `λ` with `Im(λ⁻³ψ) = 0`, where the lift switches to its real form.
pub fn real_twist_lambdas(psi: Complex64) -> Result<[Complex64; 6]> {
    let psi = finite_c("psi", psi)?;
    if psi.norm() == 0.0 {
        return Err(Error::ZeroHopf);
    }
    Ok(circle_points(psi.arg()))
}

// Points e^{iθ} with 3θ ≡ phase (mod π), sorted by θ ∈ [0, 2π).
fn circle_points(phase: f64) -> [Complex64; 6] {
    let mut thetas: Vec<f64> = (0..6).map(|k| (phase / 3.0 + k as f64 * PI / 3.0).rem_euclid(2.0 * PI)).collect();
    thetas.sort_by(f64::total_cmp);
    let mut out = [c64(0.0, 0.0); 6];
    for (slot, t) in out.iter_mut().zip(thetas) {
        *slot = Complex64::from_polar(1.0, t);
    }
    out
}
