use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Field, Ring};

/// Arbitrary-precision rational number, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Shorthand constructor for `numer / denom`.
///
/// Panics if `denom` is zero.
pub fn rational(numer: i64, denom: i64) -> Rational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

impl Ring for Rational {
    fn field_tag() -> &'static str {
        "Q"
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn try_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl Field for Rational {
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        self.recip()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn lowest_terms() {
        let q = rational(6, -4);
        assert_eq!(*q.numer(), BigInt::from(-3));
        assert_eq!(*q.denom(), BigInt::from(2));
        assert_eq!(q.to_string(), "-3/2");
        assert_eq!(rational(4, 2).to_string(), "2");
    }

    #[test]
    fn inverse() {
        assert_eq!(rational(-3, 7).try_inverse(), Some(rational(-7, 3)));
        assert_eq!(Rational::zero().try_inverse(), None);
        assert!(Rational::one().inv().is_one());
    }
}
