use num_complex::Complex64;
use thiserror::Error;

use crate::DegenerateKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite input `{name}`")]
    NonFinite { name: &'static str },

    #[error("a1 must be positive, got {a1}")]
    NonPositiveA1 { a1: f64 },

    #[error("no admissible metric: beta^3 = {beta_cubed} < 27|psi|^2 = {bound}")]
    Inadmissible { beta_cubed: f64, bound: f64 },

    #[error("negative discriminant {delta}: the cubic has complex roots")]
    ComplexRoots { delta: f64 },

    #[error("triple root: g2 = g3 = 0 has no lattice")]
    TripleRoot,

    #[error("{z} lies within {distance:e} of a lattice pole")]
    NearPole { z: Complex64, distance: f64 },

    #[error("operation requires a generic lattice, got {kind}")]
    NeedsGeneric { kind: DegenerateKind },

    #[error("could not invert wp at {value}: {reason}")]
    Inversion { value: f64, reason: &'static str },

    #[error("|lambda| = {modulus} is not on the unit circle")]
    OffUnitCircle { modulus: f64 },

    #[error("spectrum at lambda = {lambda} is degenerate: eigenvalue gap {gap:e}")]
    DegenerateSpectrum { lambda: Complex64, gap: f64 },

    #[error("psi = 0 has no degenerate lambda set")]
    ZeroHopf,

    #[error("branch point of kappa at lambda = {lambda}, y = {y}: base modulus {modulus:e}")]
    BranchPoint { lambda: Complex64, y: f64, modulus: f64 },

    #[error("integrand is singular at lambda = {lambda}: Im(lambda^-3 psi) = {im_twist:e}")]
    SingularIntegrand { lambda: Complex64, im_twist: f64 },

    #[error("lift form `{requested}` does not match Im(lambda^-3 psi) = {im_twist:e}")]
    BranchMismatch { requested: &'static str, im_twist: f64 },

    #[error("roots {first} and {second} collide within {gap:e}")]
    RootCollision { first: f64, second: f64, gap: f64 },

    #[error("no root of the shifted cubic pairs with d_{index}: mismatch {mismatch:e}")]
    Pairing { index: usize, mismatch: f64 },

    #[error("quadrature on [{a}, {b}] stalled with error estimate {estimate:e}")]
    Quadrature { a: f64, b: f64, estimate: f64 },

    #[error("closing constraint l1+l2+l3+1+k = {sum} is not zero")]
    ClosingConstraint { sum: i64 },

    #[error("k must be 0, 1 or 2, got {k}")]
    InvalidK { k: i64 },

    #[error("monodromy is not scalar: off-diagonal mass {mass:e}")]
    NotScalar { mass: f64 },

    #[error("not a vacuum: |a| = {a_abs}, |b| = {b_abs}")]
    NotVacuum { a_abs: f64, b_abs: f64 },

    #[error("factors were built at y = {expected} but the sample has y = {got}")]
    SampleMismatch { expected: f64, got: f64 },

    #[error("vacuum coefficient a vanishes")]
    ZeroVacuum,
}

impl Error {
    /// True for failures that come from the numerics rather than from malformed input.
    pub fn is_degeneracy(&self) -> bool {
        matches!(
            self,
            Error::NearPole { .. }
                | Error::NeedsGeneric { .. }
                | Error::Inversion { .. }
                | Error::DegenerateSpectrum { .. }
                | Error::BranchPoint { .. }
                | Error::SingularIntegrand { .. }
                | Error::RootCollision { .. }
                | Error::Pairing { .. }
                | Error::Quadrature { .. }
                | Error::NotScalar { .. }
                | Error::TripleRoot
        )
    }
}

pub(crate) fn finite(name: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { name })
    }
}

pub(crate) fn finite_c(name: &'static str, v: Complex64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { name })
    }
}
