use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Zero};

use super::parse::parse_expr;
use super::{Field, ParseScalarError, Rational, Ring};

/// An element `re + im·i` of Q(i), the exact stand-in for complex scalars.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn i() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl From<Rational> for GaussianRational {
    fn from(re: Rational) -> Self {
        Self::new(re, Rational::zero())
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Self::new(re, im)
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::from(Rational::one())
    }
}

impl Ring for GaussianRational {
    fn field_tag() -> &'static str {
        "Qi"
    }

    fn from_rational(q: &Rational) -> Self {
        Self::from(q.clone())
    }

    fn try_inverse(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(Self::new(c.re / &n, c.im / n))
    }

    fn symbol(name: &str) -> Option<Self> {
        (name == "i").then(Self::i)
    }
}

impl Field for GaussianRational {}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im = if self.im.is_one() {
            "i".to_string()
        } else if (-self.im.clone()).is_one() {
            "-i".to_string()
        } else {
            format!("{}i", self.im)
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => f.write_str(&im),
            (false, false) if im.starts_with('-') => write!(f, "{}{}", self.re, im),
            (false, false) => write!(f, "{}+{}", self.re, im),
        }
    }
}

impl FromStr for GaussianRational {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expr(s, &Self::symbol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn g(a: i64, b: i64, c: i64, d: i64) -> GaussianRational {
        GaussianRational::new(rational(a, b), rational(c, d))
    }

    #[test]
    fn display_forms() {
        assert_eq!(g(1, 2, 3, 4).to_string(), "1/2+3/4i");
        assert_eq!(g(1, 2, -3, 4).to_string(), "1/2-3/4i");
        assert_eq!(g(0, 1, 1, 1).to_string(), "i");
        assert_eq!(g(0, 1, -1, 1).to_string(), "-i");
        assert_eq!(g(-2, 1, 0, 1).to_string(), "-2");
    }

    #[test]
    fn parse_round_trip() {
        for z in [g(1, 2, 3, 4), g(1, 2, -3, 4), g(0, 1, 1, 1), g(0, 1, -5, 3), g(7, 1, 0, 1), g(2, 1, 1, 1)] {
            assert_eq!(z.to_string().parse::<GaussianRational>().unwrap(), z);
        }
    }

    #[test]
    fn i_squared() {
        let i = GaussianRational::i();
        assert_eq!(i.clone() * i, -GaussianRational::one());
    }

    #[test]
    fn inverse() {
        let z = g(1, 1, 2, 1);
        let w = z.try_inverse().unwrap();
        assert!((z * w).is_one());
        assert_eq!(GaussianRational::zero().try_inverse(), None);
    }
}
