//! Exact computation of twisted Ruelle zeta functions, Reidemeister torsion
//! and branched double cover homology for symbolically coded flows.
//!
//! Every algorithm is generic over a [`Scalar`] field. Two backends are
//! intended for use: [`Exact`] (arbitrary-precision rationals, no rounding)
//! and [`Float`] (complex doubles compared with an absolute tolerance).

pub mod algebra;
pub mod cover;
pub mod model;
pub mod orbits;
pub mod scalar;
pub mod torsion;
pub mod zeta;

pub use scalar::Scalar;

/// Exact rational scalars.
pub type Exact = num_rational::BigRational;
/// Complex double-precision scalars.
pub type Float = num_complex::Complex64;
