//! A small expression reader shared by every scalar type.
//!
//! Accepted syntax: sums and differences of products, `^` with a
//! non-negative integer exponent, parentheses, rational literals `p/q`,
//! division by units, and juxtaposition as multiplication (`2h`, `3/4i`).
//! Identifiers are resolved by the caller.

use std::iter::Peekable;
use std::str::CharIndices;

use num_bigint::BigInt;

use super::{ParseScalarError, Rational, Ring};

/// Parses `input` into `R`, resolving identifiers through `resolve`.
pub fn parse_expr<R: Ring>(
    input: &str,
    resolve: &dyn Fn(&str) -> Option<R>,
) -> Result<R, ParseScalarError> {
    let mut p = Parser {
        src: input,
        chars: input.char_indices().peekable(),
        resolve,
    };
    p.skip_ws();
    if p.peek().is_none() {
        return Err(ParseScalarError::new(input, "empty input"));
    }
    let v = p.expr()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(v),
        Some(c) => Err(p.err(format!("unexpected character {c:?}"))),
    }
}

struct Parser<'a, R> {
    src: &'a str,
    chars: Peekable<CharIndices<'a>>,
    resolve: &'a dyn Fn(&str) -> Option<R>,
}

impl<R: Ring> Parser<'_, R> {
    fn err(&self, reason: impl Into<String>) -> ParseScalarError {
        ParseScalarError::new(self.src, reason)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.chars.next();
        }
    }

    fn expr(&mut self) -> Result<R, ParseScalarError> {
        self.skip_ws();
        let mut negate = false;
        match self.peek() {
            Some('-') => {
                self.chars.next();
                negate = true;
            }
            Some('+') => {
                self.chars.next();
            }
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.chars.next();
                    acc = acc + self.term()?;
                }
                Some('-') => {
                    self.chars.next();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<R, ParseScalarError> {
        let mut acc = self.power()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.chars.next();
                    acc = acc * self.power()?;
                }
                Some('/') => {
                    self.chars.next();
                    let d = self.power()?;
                    let inv = d
                        .try_inverse()
                        .ok_or_else(|| self.err(format!("division by non-unit {d}")))?;
                    acc = acc * inv;
                }
                Some(c) if c.is_alphanumeric() || c == '(' || c == '_' => {
                    acc = acc * self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<R, ParseScalarError> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.chars.next();
        self.skip_ws();
        let digits = self.digits();
        let exp: u32 = digits
            .parse()
            .map_err(|_| self.err("exponent must be a non-negative integer"))?;
        let mut out = R::one();
        for _ in 0..exp {
            out = out * base.clone();
        }
        Ok(out)
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.chars.next();
        }
        s
    }

    fn atom(&mut self) -> Result<R, ParseScalarError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.chars.next();
                let v = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.err("missing ')'"));
                }
                self.chars.next();
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(c) = self.peek().filter(|c| c.is_alphanumeric() || *c == '_') {
                    name.push(c);
                    self.chars.next();
                }
                (self.resolve)(&name).ok_or_else(|| self.err(format!("unknown symbol {name:?}")))
            }
            Some(c) => Err(self.err(format!("unexpected character {c:?}"))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    /// `p` or `p/q`; the slash binds into the literal only when a digit follows.
    fn number(&mut self) -> Result<R, ParseScalarError> {
        let numer: BigInt = self.digits().parse().map_err(|_| self.err("bad integer"))?;
        let mut lookahead = self.chars.clone();
        let slash_digit = matches!(lookahead.next(), Some((_, '/')))
            && lookahead.next().is_some_and(|(_, c)| c.is_ascii_digit());
        if !slash_digit {
            return Ok(R::from_rational(&Rational::from_integer(numer)));
        }
        self.chars.next();
        let denom: BigInt = self.digits().parse().map_err(|_| self.err("bad integer"))?;
        if denom == BigInt::from(0) {
            return Err(self.err("zero denominator"));
        }
        Ok(R::from_rational(&Rational::new(numer, denom)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn q(s: &str) -> Result<Rational, ParseScalarError> {
        parse_expr(s, &|_| None)
    }

    #[test]
    fn literals_and_arithmetic() {
        assert_eq!(q("3").unwrap(), rational(3, 1));
        assert_eq!(q("-1/2").unwrap(), rational(-1, 2));
        assert_eq!(q("1/2+1/3").unwrap(), rational(5, 6));
        assert_eq!(q("2*(1-1/4)^2").unwrap(), rational(9, 8));
        assert_eq!(q("3/2/3").unwrap(), rational(1, 2));
        assert_eq!(q(" 2 - 5 ").unwrap(), rational(-3, 1));
    }

    #[test]
    fn errors() {
        assert!(q("").is_err());
        assert!(q("1/0").is_err());
        assert!(q("1/(1-1)").is_err());
        assert!(q("x").is_err());
        assert!(q("(1").is_err());
        assert!(q("1+").is_err());
    }
}
