use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Zero};

use super::parse::parse_expr;
use super::{coefficient_string, join_terms, ParseScalarError, Rational, Ring};
use crate::error::{Error, Result};

/// A power series in `h` known modulo `h^N`.
///
/// Series built with an explicit order store exactly `N` coefficients.
/// Constants coming from [`Zero`], [`One`] or [`Ring::from_rational`] carry no
/// order: they are exact, and take the order of whatever they are combined
/// with. Arithmetic between two truncated series keeps the smaller order.
#[derive(Clone, Debug)]
pub struct TruncSeries<R> {
    order: Option<usize>,
    coeffs: Vec<R>,
}

impl<R: Ring> TruncSeries<R> {
    /// `Σ coeffs[k] h^k mod h^order`; missing coefficients are zero and
    /// coefficients at or beyond `order` are dropped.
    pub fn new(mut coeffs: Vec<R>, order: usize) -> Self {
        assert!(order >= 1, "series order must be positive");
        coeffs.resize(order, R::zero());
        Self {
            order: Some(order),
            coeffs,
        }
    }

    /// An exact constant.
    pub fn constant(c: R) -> Self {
        Self {
            order: None,
            coeffs: vec![c],
        }
    }

    pub fn constant_at(c: R, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// The series `h`.
    pub fn h(order: usize) -> Self {
        Self::monomial(R::one(), 1, order)
    }

    /// `c h^k`.
    pub fn monomial(c: R, k: usize, order: usize) -> Self {
        let mut coeffs = vec![R::zero(); order.max(1)];
        if k < order {
            coeffs[k] = c;
        }
        Self::new(coeffs, order)
    }

    /// `None` for exact constants.
    pub fn order(&self) -> Option<usize> {
        self.order
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    /// Smallest `k` with a nonzero coefficient; `None` stands for infinity
    /// (every stored coefficient vanishes).
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Re-truncates to `order`, padding with zero coefficients when the order
    /// grows.
    pub fn with_order(&self, order: usize) -> Self {
        Self::new(self.coeffs.clone(), order)
    }

    /// Multiplicative inverse in `R[h]/(h^N)`.
    pub fn invert(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        let t0 = c0
            .try_inverse()
            .ok_or_else(|| Error::NotInvertible(format!("constant coefficient {c0} is not a unit")))?;
        let n = self.coeffs.len();
        let mut t: Vec<R> = Vec::with_capacity(n);
        t.push(t0.clone());
        for k in 1..n {
            let mut s = R::zero();
            for i in 1..=k {
                if !self.coeffs[i].is_zero() {
                    s = s + self.coeffs[i].clone() * t[k - i].clone();
                }
            }
            t.push(-(t0.clone() * s));
        }
        Ok(Self {
            order: self.order,
            coeffs: t,
        })
    }

    /// Divides by `h^k`; the order drops by `k`.
    ///
    /// Fails if a coefficient below `h^k` is nonzero.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if let Some(i) = self.coeffs.iter().take(k).position(|c| !c.is_zero()) {
            return Err(Error::NotInvertible(format!("series has a nonzero h^{i} coefficient, not divisible by h^{k}")));
        }
        let order = self.order.ok_or_else(|| Error::NotInvertible("cannot shift an exact constant".into()))?;
        if k >= order {
            return Err(Error::NotInvertible(format!("shift by {k} exhausts order {order}")));
        }
        Ok(Self::new(self.coeffs[k..].to_vec(), order - k))
    }

    /// Multiplies by `h^k`, keeping the order.
    pub fn shift_up(&self, k: usize) -> Self {
        let order = self.order.expect("shift of an exact constant");
        let mut coeffs = vec![R::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs, order)
    }

    /// Exact quotient `self / divisor` where `divisor = h^v · unit`.
    ///
    /// The quotient is only determined modulo `h^(N-v)`; its remaining
    /// coefficients are set to zero so the result has order `N` again. They do
    /// not affect `quotient · divisor`.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let order = match (self.order, divisor.order) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => {
                let inv = divisor.invert()?;
                return Ok(self.clone() * inv);
            }
        };
        let num = self.with_order(order);
        let den = divisor.with_order(order);
        let v = den
            .valuation()
            .ok_or_else(|| Error::NotInvertible("division by zero series".into()))?;
        let num_shift = num.shift_down(v)?;
        let den_shift = den.shift_down(v)?;
        let q = num_shift * den_shift.invert()?;
        Ok(q.with_order(order))
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> TruncSeries<S> {
        TruncSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    fn combined_order(&self, other: &Self) -> Option<usize> {
        match (self.order, other.order) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    fn zip_with(self, rhs: Self, f: impl Fn(R, R) -> R) -> Self {
        let order = self.combined_order(&rhs);
        let len = order.unwrap_or(1);
        let mut a = self.coeffs.into_iter();
        let mut b = rhs.coeffs.into_iter();
        let coeffs = (0..len)
            .map(|_| f(a.next().unwrap_or_else(R::zero), b.next().unwrap_or_else(R::zero)))
            .collect();
        Self { order, coeffs }
    }

    fn h_power(k: usize) -> String {
        if k == 1 {
            "h".into()
        } else {
            format!("h^{k}")
        }
    }
}

impl<R: Ring> PartialEq for TruncSeries<R> {
    /// Series known to different precision are compared on their common
    /// prefix; exact constants compare against every coefficient.
    fn eq(&self, other: &Self) -> bool {
        let len = self.combined_order(other).unwrap_or(1);
        (0..len).all(|k| self.coeff(k) == other.coeff(k))
    }
}

impl<R: Ring> Zero for TruncSeries<R> {
    fn zero() -> Self {
        Self::constant(R::zero())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl<R: Ring> One for TruncSeries<R> {
    fn one() -> Self {
        Self::constant(R::one())
    }
}

impl<R: Ring> Add for TruncSeries<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<R: Ring> Sub for TruncSeries<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl<R: Ring> Neg for TruncSeries<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.into_iter().map(Neg::neg).collect(),
        }
    }
}

impl<R: Ring> Mul for TruncSeries<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let order = self.combined_order(&rhs);
        let len = order.unwrap_or(1);
        let mut coeffs = vec![R::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    coeffs[i + j] = std::mem::replace(&mut coeffs[i + j], R::zero()) + a.clone() * b.clone();
                }
            }
        }
        Self { order, coeffs }
    }
}

impl<R: Ring> Ring for TruncSeries<R> {
    fn field_tag() -> &'static str {
        R::field_tag()
    }

    fn from_rational(q: &Rational) -> Self {
        Self::constant(R::from_rational(q))
    }

    fn try_inverse(&self) -> Option<Self> {
        self.invert().ok()
    }

    fn symbol(name: &str) -> Option<Self> {
        R::symbol(name).map(Self::constant)
    }

    fn parameters(&self) -> Vec<String> {
        let mut all: Vec<String> = self.coeffs.iter().flat_map(Ring::parameters).collect();
        all.sort();
        all.dedup();
        all
    }
}

impl<R: Ring> fmt::Display for TruncSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| {
            if k == 0 {
                return c.to_string();
            }
            let hk = Self::h_power(k);
            if c.is_one() {
                return hk;
            }
            if (-c.clone()).is_one() {
                return format!("-{hk}");
            }
            let cs = coefficient_string(c);
            if cs.ends_with(|ch: char| ch.is_alphabetic()) {
                format!("{cs}*{hk}")
            } else {
                format!("{cs}{hk}")
            }
        });
        f.write_str(&join_terms(terms))?;
        if let Some(n) = self.order {
            write!(f, "@order={n}")?;
        }
        Ok(())
    }
}

impl<R: Ring> FromStr for TruncSeries<R> {
    type Err = ParseScalarError;

    /// Reads `"1+2h-h^3@order=5"`. Without the `@order` suffix the input must
    /// not mention `h` and yields an exact constant.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.split_once('@') {
            Some((body, suffix)) => {
                let n: usize = suffix
                    .trim()
                    .strip_prefix("order=")
                    .and_then(|n| n.trim().parse().ok())
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| ParseScalarError::new(s, "expected @order=N with N >= 1"))?;
                let resolve = |name: &str| {
                    if name == "h" {
                        Some(Self::h(n))
                    } else {
                        R::symbol(name).map(|c| Self::constant_at(c, n))
                    }
                };
                parse_expr(body, &resolve).map(|v: Self| v.with_order(n))
            }
            None => {
                let resolve = |name: &str| {
                    if name == "h" {
                        None
                    } else {
                        R::symbol(name).map(Self::constant)
                    }
                };
                parse_expr(s, &resolve)
                    .map_err(|e| ParseScalarError::new(s, format!("{} (series using h need an @order=N suffix)", e.reason)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, ParamPoly};

    type S = TruncSeries<Rational>;

    fn s(x: &str) -> S {
        x.parse().unwrap()
    }

    #[test]
    fn invert_examples() {
        assert_eq!(s("1@order=4").invert().unwrap(), s("1@order=4"));
        assert_eq!(s("1+h@order=4").invert().unwrap(), s("1-h+h^2-h^3@order=4"));
        // (2+h)^{-1} = 1/2 - h/4 + h^2/8 mod h^3; check by multiplying back too.
        let inv = s("2+h@order=3").invert().unwrap();
        assert_eq!(inv.coeffs(), &[rational(1, 2), rational(-1, 4), rational(1, 8)]);
        assert!((inv * s("2+h@order=3")).is_one_exactly());
    }

    #[test]
    fn invert_rejects_non_units() {
        assert!(matches!(s("h+h^2@order=3").invert(), Err(Error::NotInvertible(_))));
        let p: TruncSeries<ParamPoly<Rational>> = "a+h@order=3".parse().unwrap();
        assert!(p.invert().is_err());
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(s("3h^2+5h^3@order=6").valuation(), Some(2));
        assert_eq!(s("0@order=4").valuation(), None);
        assert_eq!(s("h@order=2").valuation(), Some(1));
    }

    #[test]
    fn truncation_drops_high_terms() {
        let x = s("1+h@order=3");
        assert_eq!((x.clone() * x.clone() * x).coeffs(), &[rational(1, 1), rational(3, 1), rational(3, 1)]);
        assert_eq!(s("h^5@order=3"), s("0@order=3"));
    }

    #[test]
    fn exact_constants_adopt_order() {
        let x = s("h@order=3") + S::one();
        assert_eq!(x.order(), Some(3));
        assert_eq!(x, s("1+h@order=3"));
        assert_eq!(S::from_i64(2).order(), None);
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(s("1+2h-h^3@order=5").to_string(), "1+2h-h^3@order=5");
        assert_eq!(s("1/2h@order=3").to_string(), "1/2h@order=3");
        assert_eq!(s("0@order=2").to_string(), "0@order=2");
        let p: TruncSeries<ParamPoly<Rational>> = "a+(b+1)*h+a*h^2@order=4".parse().unwrap();
        assert_eq!(p.to_string().parse::<TruncSeries<ParamPoly<Rational>>>().unwrap(), p);
        assert_eq!(p.to_string(), "a+(b+1)h+a*h^2@order=4");
        assert!("1+h".parse::<S>().is_err());
        assert!("1+h@order=0".parse::<S>().is_err());
    }

    #[test]
    fn exact_division() {
        // 3h^2 / (3h^2 + 5h^3) at order 6: only the first four coefficients are determined.
        let q = s("3h^2@order=6").div_exact(&s("3h^2+5h^3@order=6")).unwrap();
        assert_eq!(q.order(), Some(6));
        assert_eq!(q * s("3h^2+5h^3@order=6"), s("3h^2@order=6"));
        assert!(s("h@order=4").div_exact(&s("h^2@order=4")).is_err());
    }

    impl S {
        fn is_one_exactly(&self) -> bool {
            self.coeffs()[0].is_one() && self.coeffs()[1..].iter().all(Zero::is_zero)
        }
    }
}
