//! Globally adaptive Gauss–Kronrod (7/15) quadrature for complex-valued integrands.

use num_complex::Complex64;

use crate::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5] and the centre.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs: 1e-12, rel: 1e-13, max_intervals: 2000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    /// Sum of per-interval `|K15 - G7|`, a deliberately pessimistic bound.
    pub error: f64,
    pub evaluations: usize,
}

struct Piece {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn kronrod<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> Piece {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(centre - dx) + f(centre + dx);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    Piece { a, b, value: k * half, error: ((k - g) * half).norm() }
}

/// Integrate `f` over `[a, b]` (either orientation).
pub fn integrate<F: FnMut(f64) -> Complex64>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate { value: Complex64::new(0.0, 0.0), error: 0.0, evaluations: 0 });
    }
    let mut pieces = vec![kronrod(&mut f, a, b)];
    let mut evaluations = 15;
    loop {
        let value: Complex64 = pieces.iter().map(|p| p.value).sum();
        let error: f64 = pieces.iter().map(|p| p.error).sum();
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::Quadrature { a, b, estimate: f64::INFINITY });
        }
        if error <= tol.abs.max(tol.rel * value.norm()) {
            return Ok(Estimate { value, error, evaluations });
        }
        if pieces.len() >= tol.max_intervals {
            return Err(Error::Quadrature { a, b, estimate: error });
        }
        let worst = pieces.iter().enumerate().max_by(|x, y| x.1.error.total_cmp(&y.1.error)).map(|(i, _)| i).unwrap_or(0);
        let piece = pieces.swap_remove(worst);
        let mid = 0.5 * (piece.a + piece.b);
        if mid == piece.a || mid == piece.b {
            return Err(Error::Quadrature { a, b, estimate: error });
        }
        pieces.push(kronrod(&mut f, piece.a, mid));
        pieces.push(kronrod(&mut f, mid, piece.b));
        evaluations += 30;
    }
}

/// Integrate over consecutive segments `[knots[0], knots[1]], [knots[1], knots[2]], ...`,
/// each to the full tolerance.
pub fn integrate_piecewise<F: FnMut(f64) -> Complex64>(mut f: F, knots: &[f64], tol: Tolerance) -> Result<Estimate> {
    let mut total = Estimate { value: Complex64::new(0.0, 0.0), error: 0.0, evaluations: 0 };
    for w in knots.windows(2) {
        let e = integrate(&mut f, w[0], w[1], tol)?;
        total.value += e.value;
        total.error += e.error;
        total.evaluations += e.evaluations;
    }
    Ok(total)
}

/// Knots `0, ±step, ±2·step, ..., y` splitting `[0, y]` at multiples of `step`.
pub fn knots_at_multiples(y: f64, step: f64) -> Vec<f64> {
    let mut knots = vec![0.0];
    if step.is_finite() && step > 0.0 {
        let sign = y.signum();
        let mut k = 1.0;
        while k * step < y.abs() * (1.0 - 1e-14) {
            knots.push(sign * k * step);
            k += 1.0;
        }
    }
    if y != 0.0 {
        knots.push(y);
    }
    knots
}
