use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Zero};

use super::parse::parse_expr;
use super::{coefficient_string, join_terms, Field, ParseScalarError, Rational, Ring, ScaleBy};
use crate::error::{Error, Result};

/// A power product of named parameters, stored sorted by name with nonzero
/// exponents only. The empty monomial is `1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(name: &str) -> Self {
        Self(vec![(name.to_string(), 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    fn mul(&self, other: &Self) -> Self {
        let mut merged: BTreeMap<&str, u32> = BTreeMap::new();
        for (v, e) in self.0.iter().chain(&other.0) {
            *merged.entry(v.as_str()).or_default() += e;
        }
        Self(merged.into_iter().map(|(v, e)| (v.to_string(), e)).collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// Sparse multivariate polynomial in named parameters.
///
/// Zero coefficients are never stored, so equality is structural.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamPoly<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Ring> ParamPoly<C> {
    pub fn constant(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Self { terms }
    }

    pub fn var(name: &str) -> Self {
        Self::term(C::one(), Monomial::var(name))
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Parameter names occurring with nonzero coefficient, sorted.
    pub fn variables(&self) -> Vec<String> {
        let set: BTreeSet<&String> = self.terms.keys().flat_map(|m| m.0.iter().map(|(v, _)| v)).collect();
        set.into_iter().cloned().collect()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn constant_term(&self) -> C {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(C::zero)
    }

    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Exact evaluation at a full assignment.
    pub fn substitute(&self, assignment: &BTreeMap<String, C>) -> Result<C> {
        let missing: Vec<String> = self
            .variables()
            .into_iter()
            .filter(|v| !assignment.contains_key(v))
            .collect();
        if !missing.is_empty() {
            return Err(Error::MissingSymbol(missing));
        }
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.0 {
                for _ in 0..*e {
                    t = t * assignment[v].clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Replaces the named parameters by polynomials, leaving the others alone.
    pub fn substitute_partial(&self, assignment: &BTreeMap<String, ParamPoly<C>>) -> Self {
        let mut acc = Self::zero();
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            let mut rest = Vec::new();
            for (v, e) in &m.0 {
                match assignment.get(v) {
                    Some(p) => {
                        for _ in 0..*e {
                            t = t * p.clone();
                        }
                    }
                    None => rest.push((v.clone(), *e)),
                }
            }
            acc = acc + t * Self::term(C::one(), Monomial(rest));
        }
        acc
    }

    /// Splits a polynomial of degree at most one into its linear coefficients
    /// and constant term.
    pub fn linear_form(&self) -> Option<(BTreeMap<String, C>, C)> {
        let mut lin = BTreeMap::new();
        let mut c0 = C::zero();
        for (m, c) in &self.terms {
            match m.0.as_slice() {
                [] => c0 = c.clone(),
                [(v, 1)] => {
                    lin.insert(v.clone(), c.clone());
                }
                _ => return None,
            }
        }
        Some((lin, c0))
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> ParamPoly<D> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = f(c);
            if !d.is_zero() {
                terms.insert(m.clone(), d);
            }
        }
        ParamPoly { terms }
    }

    fn insert_add(terms: &mut BTreeMap<Monomial, C>, m: Monomial, c: C) {
        use std::collections::btree_map::Entry;
        match terms.entry(m) {
            Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }
}

impl<C: Ring> Zero for ParamPoly<C> {
    fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Ring> One for ParamPoly<C> {
    fn one() -> Self {
        Self::constant(C::one())
    }
}

impl<C: Ring> Add for ParamPoly<C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        for (m, c) in small.terms {
            Self::insert_add(&mut big.terms, m, c);
        }
        big
    }
}

impl<C: Ring> Neg for ParamPoly<C> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<C: Ring> Sub for ParamPoly<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<C: Ring> Mul for ParamPoly<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                Self::insert_add(&mut terms, m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        Self { terms }
    }
}

impl<C: Ring> Ring for ParamPoly<C> {
    fn field_tag() -> &'static str {
        C::field_tag()
    }

    fn parameters(&self) -> Vec<String> {
        self.variables()
    }

    fn from_rational(q: &Rational) -> Self {
        Self::constant(C::from_rational(q))
    }

    fn try_inverse(&self) -> Option<Self> {
        self.as_constant().and_then(|c| c.try_inverse()).map(Self::constant)
    }

    fn symbol(name: &str) -> Option<Self> {
        C::symbol(name).map(Self::constant).or_else(|| Some(Self::var(name)))
    }
}

impl<F: Field> ScaleBy<F> for ParamPoly<F> {
    fn scale(&self, by: &F) -> Self {
        if by.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.clone() * by.clone())).collect(),
        }
    }
}

impl<C: Ring> fmt::Display for ParamPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut ordered: Vec<(&Monomial, &C)> = self.terms.iter().collect();
        ordered.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| a.0.cmp(b.0)));
        let rendered = ordered.into_iter().map(|(m, c)| {
            if m.is_one() {
                c.to_string()
            } else if c.is_one() {
                m.to_string()
            } else if (-c.clone()).is_one() {
                format!("-{m}")
            } else {
                format!("{}*{m}", coefficient_string(c))
            }
        });
        f.write_str(&join_terms(rendered))
    }
}

impl<C: Ring> FromStr for ParamPoly<C> {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        parse_expr(s, &Self::symbol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, GaussianRational};

    type P = ParamPoly<Rational>;

    fn p(s: &str) -> P {
        s.parse().unwrap()
    }

    fn assign(pairs: &[(&str, Rational)]) -> BTreeMap<String, Rational> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    #[test]
    fn substitute_examples() {
        let a_2b = p("a+2*b");
        assert_eq!(a_2b.substitute(&assign(&[("a", rational(1, 1)), ("b", rational(3, 1))])).unwrap(), rational(7, 1));
        let ab = p("a*b");
        assert_eq!(ab.substitute(&assign(&[("a", rational(0, 1)), ("b", rational(5, 1))])).unwrap(), rational(0, 1));
        let lam2 = p("lambda^2");
        assert_eq!(lam2.substitute(&assign(&[("lambda", rational(1, 2))])).unwrap(), rational(1, 4));
    }

    #[test]
    fn missing_symbol_lists_every_unassigned_variable() {
        let e = p("a*b+c").substitute(&assign(&[("b", rational(1, 1))])).unwrap_err();
        assert_eq!(e, Error::MissingSymbol(vec!["a".into(), "c".into()]));
    }

    #[test]
    fn canonical_form() {
        assert_eq!(p("a*b - b*a"), P::zero());
        assert_eq!(p("(a+1)^2"), p("a^2+2*a+1"));
        assert_eq!(p("3*a*b^2-1/2").to_string(), "3*a*b^2-1/2");
        assert_eq!(p("-a+b").to_string(), "-a+b");
        assert_eq!(p("b*a").variables(), vec!["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn display_reparses() {
        for s in ["3*a*b^2-1/2", "-a^3+2/3*a*b-7", "x", "0", "-1"] {
            let v = p(s);
            assert_eq!(p(&v.to_string()), v);
        }
        let g: ParamPoly<GaussianRational> = "(1+i)*a - 2i*b + 1/2".parse().unwrap();
        assert_eq!(g.to_string().parse::<ParamPoly<GaussianRational>>().unwrap(), g);
    }

    #[test]
    fn linear_form_and_partial_substitution() {
        let (lin, c) = p("2*a - b + 3").linear_form().unwrap();
        assert_eq!(lin["a"], rational(2, 1));
        assert_eq!(lin["b"], rational(-1, 1));
        assert_eq!(c, rational(3, 1));
        assert!(p("a*b").linear_form().is_none());
        let mut sub = BTreeMap::new();
        sub.insert("a".to_string(), p("b+1"));
        assert_eq!(p("a^2+b").substitute_partial(&sub), p("b^2+3*b+1"));
    }

    #[test]
    fn units() {
        assert_eq!(p("2").try_inverse(), Some(p("1/2")));
        assert_eq!(p("a").try_inverse(), None);
        assert_eq!(P::zero().try_inverse(), None);
    }
}
