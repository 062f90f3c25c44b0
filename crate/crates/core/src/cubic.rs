//! Real roots of depressed cubics by the trigonometric method.

use std::f64::consts::PI;

/// Roots of `t³ + p t + q = 0`, sorted descending, when all three are real.
///
/// Returns `None` when the cubic has a complex-conjugate pair. A slightly negative
/// discriminant caused by rounding (relative size below `1e-12`) is treated as a double root.
pub fn depressed_real_roots(p: f64, q: f64) -> Option<[f64; 3]> {
    if p == 0.0 && q == 0.0 {
        return Some([0.0; 3]);
    }
    if p >= 0.0 {
        return None;
    }
    let disc = -(4.0 * p * p * p + 27.0 * q * q);
    let scale = (4.0 * p * p * p).abs() + 27.0 * q * q;
    if disc < -1e-12 * scale {
        return None;
    }
    let r = 2.0 * (-p / 3.0).sqrt();
    let arg = ((3.0 * q) / (p * r)).clamp(-1.0, 1.0);
    let phi = arg.acos() / 3.0;
    let mut roots = [0.0; 3];
    for (k, root) in roots.iter_mut().enumerate() {
        let t = r * (phi - 2.0 * PI * k as f64 / 3.0).cos();
        *root = polish(p, q, t);
    }
    roots.sort_by(|a, b| b.total_cmp(a));
    Some(roots)
}

/// Real roots of `c3 v³ + c1 v + c0 = 0` (no quadratic term), sorted descending.
pub fn real_roots_no_quadratic(c3: f64, c1: f64, c0: f64) -> Option<[f64; 3]> {
    depressed_real_roots(c1 / c3, c0 / c3)
}

fn polish(p: f64, q: f64, t: f64) -> f64 {
    let f = t * t * t + p * t + q;
    let df = 3.0 * t * t + p;
    // Near a double root the derivative vanishes and a Newton step only adds noise.
    if df.abs() < 1e-6 * (p.abs() + 3.0 * t * t) {
        return t;
    }
    let next = t - f / df;
    let f_next = next * next * next + p * next + q;
    if f_next.abs() <= f.abs() {
        next
    } else {
        t
    }
}
