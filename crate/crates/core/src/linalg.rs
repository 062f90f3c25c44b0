//! Small 3×3 complex helpers on top of `nalgebra`.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

pub type CMatrix3 = Matrix3<Complex64>;
pub type CVector3 = Vector3<Complex64>;

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix3) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entry modulus of a vector.
pub fn max_abs_vec(v: &CVector3) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Hermitian product `⟨x, y⟩ = Σ x_k conj(y_k)`, linear in the first slot.
pub fn hermitian(x: &CVector3, y: &CVector3) -> Complex64 {
    x.iter().zip(y.iter()).map(|(a, b)| a * b.conj()).sum()
}

/// `‖M*M − I‖` in the max-entry norm.
pub fn unitarity_defect(m: &CMatrix3) -> f64 {
    max_abs(&(m.adjoint() * m - CMatrix3::identity()))
}

pub fn diag(d: [Complex64; 3]) -> CMatrix3 {
    CMatrix3::from_diagonal(&CVector3::new(d[0], d[1], d[2]))
}

/// `L · diag(values) · L*` for unitary `L`.
pub fn spectral_sum(l: &CMatrix3, values: [Complex64; 3]) -> CMatrix3 {
    l * diag(values) * l.adjoint()
}

/// Bilinear cross product (no conjugation), orthogonal to both inputs under `Σ a_k b_k`.
pub fn cross(a: &CVector3, b: &CVector3) -> CVector3 {
    CVector3::new(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])
}

/// Scale `v` to unit norm and rotate its phase so the largest-modulus component is real
/// positive. Near-ties (within a relative `1e-10`) go to the lowest index.
pub fn normalize_phase(v: &CVector3) -> CVector3 {
    let v = v / Complex64::new(v.norm(), 0.0);
    let top = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = v.iter().position(|z| z.norm() >= top * (1.0 - 1e-10)).unwrap_or(0);
    let phase = v[pivot] / v[pivot].norm();
    v * phase.conj()
}
