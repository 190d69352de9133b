//! Exact computations with Novikov deformations of commutative associative
//! algebras and their classical limits, the transposed Poisson algebras.
//!
//! The library is generic over the coefficient ring (see [`scalar::Ring`]).
//! The aliases below fix the rings used in practice.

pub mod algebra;
pub mod deform;
pub mod dim2;
pub mod equiv;
pub mod error;
pub mod linalg;
pub mod scalar;

pub use error::{Error, FailedCheck, Result};
pub use scalar::{rational, Field, GaussianRational, ParamPoly, Rational, Ring, TruncSeries};

/// Rational numbers.
pub type Q = Rational;
/// Gaussian rationals Q(i).
pub type Qi = GaussianRational;
/// Polynomials in named parameters over Q.
pub type QPoly = ParamPoly<Q>;
/// Polynomials in named parameters over Q(i).
pub type QiPoly = ParamPoly<Qi>;
/// Truncated power series in `h` over Q.
pub type QSeries = TruncSeries<Q>;
/// Truncated power series in `h` over Q(i).
pub type QiSeries = TruncSeries<Qi>;
