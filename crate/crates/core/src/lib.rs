//! Numerics for translationally equivariant minimal Lagrangian surfaces in CP².
//!
//! The pipeline runs bottom-up:
//!
//! * [`elliptic`] evaluates the Weierstrass functions for real invariants.
//! * [`metric`] turns `(a1, psi)` into the conformal factor `w(y) = e^{u(y)}`.
//! * [`spectral`] builds the constant potential `D(λ)` and its eigen-data.
//! * [`iwasawa`] assembles the explicit factors `Q`, `β₁`, `β₂` and the extended frame.
//! * [`immersion`] produces horizontal lifts, geometry checks and closing conditions.
//!
//! Every public computation is a pure function of immutable inputs.

pub mod cubic;
pub mod elliptic;
mod error;
pub mod immersion;
pub mod iwasawa;
pub mod linalg;
pub mod metric;
pub mod quadrature;
pub mod spectral;

pub use error::{Error, Result};
pub use linalg::{CMatrix3, CVector3};
pub use num_complex::Complex64;

/// Degeneration class of a lattice, shared by the elliptic and metric layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DegenerateKind {
    /// Three distinct real roots.
    Generic,
    /// `e1 = e2`: hyperbolic limit, the real period is infinite. Arises for a vanishing Hopf coefficient.
    PsiZero,
    /// `e2 = e3`: trigonometric limit, the imaginary period is infinite. Arises for the constant metric.
    Flat,
}

impl std::fmt::Display for DegenerateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DegenerateKind::Generic => "Generic",
            DegenerateKind::PsiZero => "PsiZero",
            DegenerateKind::Flat => "Flat",
        })
    }
}

#[inline]
pub(crate) fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The unit-circle point `e^{iθ}`.
pub fn unit_lambda(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}
pub use spectral::twist;
