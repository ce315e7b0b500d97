//! Tangential contact stress for an elastic semi-infinite patch bonded to an
//! elastic plate through a thin adhesive layer.
//!
//! A horizontal end load `T` applied to the patch at `x = 0` is transferred to
//! the plate through shear in the glue line. The unknown shear traction
//! `tau(x)` satisfies a singular integro-differential equation on the half
//! line; in transform space this becomes a scalar Riemann (linear conjugation)
//! problem with coefficient `1 + lambda*|s| + k*s^2`, which this crate solves
//! by Wiener-Hopf factorization. Two independent factorizations of the same
//! coefficient are implemented and cross-checked against each other and
//! against a direct collocation discretization of the original equation.
//!
//! Modules:
//! - [`params`]: physical constants -> model constants `lambda`, `k`.
//! - [`quadrature`]: principal-value Cauchy integrals, Cauchy transforms,
//!   boundary values, oscillatory Fourier inversion.
//! - [`wiener_hopf`]: coefficient factorizations, canonical solution `X(z)`,
//!   transform-domain solution, contact stress.
//! - [`oracle`]: independent collocation solver for the original equation.
//! - [`analysis`]: endpoint exponents, equilibrium checks, cross-validation,
//!   stiffness sweeps.
//!
//! The crate is `no_std` (with `alloc`); all floating-point math goes through
//! `num-traits`/`libm` so the numerics are identical with or without `std`.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]
// Negated comparisons like `!(x > 0.0)` are deliberate: they reject NaN,
// which `x <= 0.0` lets through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Quadrature node/weight tables keep their full published precision.
#![allow(clippy::excessive_precision)]

extern crate alloc;

pub mod analysis;
pub mod oracle;
pub mod params;
pub mod quadrature;
pub mod wiener_hopf;

pub use params::{derive_model_params, ContactCase, MaterialSpec, ModelParams};
pub use quadrature::QuadratureSpec;
pub use wiener_hopf::{CoefficientCase, FactorizationCertificate, Method, StressSolution};

use core::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A material constant violates its admissible range.
    InvalidMaterial(&'static str),
    /// Requested solution case is inconsistent with the derived `k`.
    CaseMismatch(&'static str),
    /// An adaptive quadrature exhausted its panel budget.
    Nonconvergence(&'static str),
    /// Principal-value point sits on (or outside) the interval boundary.
    SingularEndpoint(f64),
    /// Cauchy transform requested on the real axis; use boundary values.
    OnAxis,
    /// Factorization certificate exceeded its jump-residual tolerance.
    CertificateFailed { max_jump_residual: f64 },
    /// Spectral tail did not fit an algebraic decay model.
    TailFitFailed { exponent: f64 },
    /// Imaginary residue of the recovered stress exceeded threshold.
    RealnessViolation { im_ratio: f64 },
    /// Direct collocation does not support the rigid `k = 0` limit.
    KZeroUnsupported,
    /// Collocation matrix is numerically singular.
    SingularSystem { pivot: f64 },
    /// Residual probe lies outside the solution grid.
    ProbeOutOfRange(f64),
    /// Solution grid does not cover the domain a check requires.
    InsufficientDomain { have: f64, need: f64 },
    /// Exponent-fit window contains a sign change of tau.
    SignChangeInWindow,
    /// Exponent-fit window holds fewer samples than required.
    TooFewPoints { have: usize, need: usize },
    /// Malformed grid or window argument.
    BadArgument(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidMaterial(what) => write!(f, "invalid material constant: {what}"),
            Error::CaseMismatch(what) => write!(f, "case mismatch: {what}"),
            Error::Nonconvergence(ctx) => write!(f, "quadrature failed to converge: {ctx}"),
            Error::SingularEndpoint(x) => {
                write!(
                    f,
                    "principal-value point {x} at or outside interval boundary"
                )
            }
            Error::OnAxis => write!(f, "Cauchy transform evaluated on the real axis"),
            Error::CertificateFailed { max_jump_residual } => {
                write!(
                    f,
                    "factorization certificate failed: jump residual {max_jump_residual:e}"
                )
            }
            Error::TailFitFailed { exponent } => {
                write!(f, "spectral tail fit failed: exponent {exponent}")
            }
            Error::RealnessViolation { im_ratio } => {
                write!(f, "stress imaginary residue {im_ratio:e} exceeds threshold")
            }
            Error::KZeroUnsupported => write!(f, "direct collocation requires k > 0"),
            Error::SingularSystem { pivot } => {
                write!(f, "collocation system singular (pivot {pivot:e})")
            }
            Error::ProbeOutOfRange(x) => write!(f, "probe {x} outside solution grid"),
            Error::InsufficientDomain { have, need } => {
                write!(f, "solution covers up to {have} but {need} is required")
            }
            Error::SignChangeInWindow => write!(f, "tau changes sign inside the fit window"),
            Error::TooFewPoints { have, need } => {
                write!(f, "fit window holds {have} samples, {need} required")
            }
            Error::BadArgument(what) => write!(f, "bad argument: {what}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
