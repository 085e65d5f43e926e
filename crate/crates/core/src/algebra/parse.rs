//! Recursive-descent reader for polynomial and rational-function text.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! Identifiers must be declared in the variable list passed in.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::mpoly::{MPoly, Vars};
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: Vars,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.unary()?;
                    if rhs.is_zero() {
                        self.pos = at;
                        return self.err("division by zero");
                    }
                    acc = acc.div(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = match u32::try_from(&e) {
                Ok(e) if e <= 4096 => e,
                _ => return self.err("exponent out of range"),
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RatFunc::from_poly(MPoly::constant(
                    self.vars.clone(),
                    BigRational::from_integer(n),
                )))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                if !self.vars.iter().any(|v| v == name) {
                    self.pos = start;
                    return Err(Error::UnknownVariable(name.to_string()));
                }
                Ok(RatFunc::from_poly(MPoly::var(self.vars.clone(), name)?))
            }
            Some(c) => self.err(format!("unexpected character `{}`", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a rational expression over the declared variables.
pub fn parse_ratfunc(text: &str, vars: &Vars) -> Result<RatFunc> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars: vars.clone(),
    };
    let r = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(r)
}

/// Parses a polynomial; division is only allowed by constants.
pub fn parse_poly(text: &str, vars: &Vars) -> Result<MPoly> {
    let r = parse_ratfunc(text, vars)?;
    r.as_poly().ok_or_else(|| Error::Parse {
        pos: 0,
        msg: "expression is not a polynomial (division by a non-constant)".into(),
    })
}

impl MPoly {
    pub fn parse(text: &str, vars: &Vars) -> Result<MPoly> {
        parse_poly(text, vars)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::vars_of;

    #[test]
    fn round_trip_canonical_form() {
        let v = vars_of(&["x", "y"]);
        let p = MPoly::parse("x^2*y^2 + 2*x*y^2 + y^2 + x*y + y + 1", &v).unwrap();
        let again = MPoly::parse(&p.to_string(), &v).unwrap();
        assert_eq!(p, again);
        assert_eq!(p.to_string(), again.to_string());
    }

    #[test]
    fn parses_rational_coefficients_and_parens() {
        let v = vars_of(&["x"]);
        let p = MPoly::parse("-(x - 1)^2/3 + 1/2", &v).unwrap();
        assert_eq!(p.to_string(), "-1/3*x^2 + 2/3*x + 1/6");
    }

    #[test]
    fn rejects_unknown_variables() {
        let v = vars_of(&["x"]);
        assert_eq!(
            MPoly::parse("x + q", &v),
            Err(Error::UnknownVariable("q".into()))
        );
    }

    #[test]
    fn rejects_polynomial_division_as_poly() {
        let v = vars_of(&["x", "y"]);
        assert!(MPoly::parse("x/y", &v).is_err());
        assert!(parse_ratfunc("x/y", &v).is_ok());
    }

    #[test]
    fn reports_position_of_garbage() {
        let v = vars_of(&["x"]);
        match MPoly::parse("x + $", &v) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
    }
}
