//! Exact coefficient rings.
//!
//! Everything in this crate is generic over [`Ring`]: the rationals, the
//! Gaussian rationals, multivariate parameter polynomials over either of
//! those, and truncated power series in `h` over any of them. There is no
//! floating point anywhere in the tower.

mod gaussian;
mod parse;
mod poly;
mod rational;
mod series;

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

pub use gaussian::GaussianRational;
pub use parse::parse_expr;
pub use poly::{Monomial, ParamPoly};
pub use rational::{rational, Rational};
pub use series::TruncSeries;

/// A commutative ring with exact equality.
///
/// Implementors are immutable values that can be shared across threads.
pub trait Ring:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    /// The ground field, `"Q"` or `"Qi"`.
    fn field_tag() -> &'static str;

    /// The image of a rational number under the canonical embedding.
    fn from_rational(q: &Rational) -> Self;

    /// Multiplicative inverse, when the element is a unit.
    fn try_inverse(&self) -> Option<Self>;

    /// Named constants understood by the scalar parser (`i` for the Gaussian
    /// rationals, parameter names for polynomials).
    fn symbol(_name: &str) -> Option<Self> {
        None
    }

    /// Parameter names the element depends on, sorted.
    fn parameters(&self) -> Vec<String> {
        Vec::new()
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(n.into()))
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    /// Inverse of a nonzero element.
    ///
    /// Panics on zero; callers test `is_zero` first.
    fn inv(&self) -> Self {
        self.try_inverse().expect("inverse of zero")
    }

    fn div(&self, other: &Self) -> Self {
        self.clone() * other.inv()
    }
}

/// Scalar multiplication by field elements, used for right-hand sides carried
/// through exact elimination.
pub trait ScaleBy<F>: Clone + Zero + Sub<Output = Self> {
    fn scale(&self, by: &F) -> Self;
}

impl<F: Field> ScaleBy<F> for F {
    fn scale(&self, by: &F) -> Self {
        self.clone() * by.clone()
    }
}

/// Error raised when a scalar string cannot be read.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse scalar {input:?}: {reason}")]
pub struct ParseScalarError {
    pub input: String,
    pub reason: String,
}

impl ParseScalarError {
    pub(crate) fn new(input: &str, reason: impl Into<String>) -> Self {
        Self {
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}

/// Wraps compound coefficient strings in parentheses so that juxtaposition
/// with a monomial reparses to the same value.
pub(crate) fn coefficient_string<R: Display>(c: &R) -> String {
    let s = c.to_string();
    let body = s.strip_prefix('-').unwrap_or(&s);
    if body.contains(['+', '-', '*', '^']) {
        format!("({s})")
    } else {
        s
    }
}

/// Joins already-signed terms as `a+b-c`.
pub(crate) fn join_terms(terms: impl IntoIterator<Item = String>) -> String {
    let mut out = String::new();
    for t in terms {
        if !out.is_empty() && !t.starts_with('-') {
            out.push('+');
        }
        out.push_str(&t);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
