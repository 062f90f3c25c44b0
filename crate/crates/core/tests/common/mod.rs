//! Independent numerical oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use mlsurf_core::{CMatrix3, Complex64};
use nalgebra::Matrix3;

pub const A1: f64 = 1.3;

pub fn psi() -> Complex64 {
    Complex64::new(-1.0, 0.0)
}

pub fn lambda() -> Complex64 {
    Complex64::from_polar(1.0, PI / 5.0)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn max_abs(m: &CMatrix3) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Arithmetic–geometric mean.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..60 {
        let (na, nb) = (0.5 * (a + b), (a * b).sqrt());
        a = na;
        b = nb;
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
    }
    0.5 * (a + b)
}

/// Carlson's symmetric integral `R_F(x, y, z)` by duplication.
pub fn carlson_rf(mut x: f64, mut y: f64, mut z: f64) -> f64 {
    for _ in 0..200 {
        let l = (x * y).sqrt() + (y * z).sqrt() + (z * x).sqrt();
        x = 0.25 * (x + l);
        y = 0.25 * (y + l);
        z = 0.25 * (z + l);
        let m = (x + y + z) / 3.0;
        if ((x - m).abs().max((y - m).abs()).max((z - m).abs())) < 1e-4 * m {
            let (dx, dy, dz) = (1.0 - x / m, 1.0 - y / m, 1.0 - z / m);
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / m.sqrt();
        }
    }
    f64::NAN
}

/// Roots of a monic cubic `x³ + a x² + b x + c` from the eigenvalues of its companion matrix.
pub fn companion_roots(a: f64, b: f64, c: f64) -> Vec<Complex64> {
    let m = Matrix3::new(0.0, 0.0, -c, 1.0, 0.0, -b, 0.0, 1.0, -a);
    m.complex_eigenvalues().iter().copied().collect()
}

pub fn real_sorted_desc(roots: &[Complex64]) -> Vec<f64> {
    let mut r: Vec<f64> = roots.iter().map(|z| z.re).collect();
    r.sort_by(|x, y| y.total_cmp(x));
    r
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, n: usize) -> Complex64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += f(a + k as f64 * h) * w;
    }
    s * (h / 3.0)
}

/// Determinant by cofactor expansion, independent of the library's LU.
pub fn det3(m: &CMatrix3) -> Complex64 {
    m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)]) - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
        + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
}

/// Fourier coefficient `(1/N) Σ f(λ_k) λ_k^{-n}` of samples on the circle.
pub fn fourier(samples: &[(Complex64, CMatrix3)], n: i32) -> CMatrix3 {
    let mut acc = CMatrix3::zeros();
    for (lam, m) in samples {
        acc += m * lam.powi(-n);
    }
    acc / Complex64::new(samples.len() as f64, 0.0)
}

/// Midpoint-offset sample points on the unit circle.
pub fn circle(n: usize) -> Vec<Complex64> {
    (0..n).map(|k| Complex64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.5) / n as f64)).collect()
}

/// Deterministic uniform sampler for fixed-seed sweeps.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}
