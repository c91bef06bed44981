//! Recursive-descent parser for the expression DSL.
//!
//! Grammar (whitespace insignificant, `^` > `*` > `+`/`-`):
//!
//! ```text
//! expr    := term { ("+"|"-") term }
//! term    := factor { "*" factor }
//! factor  := base [ "^" nat ]
//! base    := "(" expr ")" | var | rational
//! var     := "x" [ nat ]              ("x" is "x1")
//! rational:= [ "-" ] nat [ "/" nat ]
//! nat     := digit { digit }
//! ```
//!
//! Exponents are decimal naturals of unbounded size.

use super::{ExprBuilder, NodeId};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    msg: String,
}

impl ParseError {
    pub fn new(pos: usize, msg: impl Into<String>) -> Self {
        ParseError {
            pos,
            msg: msg.into(),
        }
    }

    pub(crate) fn shift(mut self, delta: usize) -> Self {
        self.pos += delta;
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at byte {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

struct Scanner<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }


    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(ParseError::new(
                self.pos,
                format!("expected '{}'", c as char),
            )),
        }
    }

    /// nat := digit { digit }, directly at the cursor (no leading whitespace
    /// skip — callers decide whether adjacency matters).
    fn nat_here(&mut self) -> Option<BigUint> {
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        BigUint::parse_bytes(&self.text[start..self.pos], 10)
    }

    fn nat(&mut self) -> Result<BigUint, ParseError> {
        self.skip_ws();
        self.nat_here()
            .ok_or_else(|| ParseError::new(self.pos, "expected a natural number"))
    }
}

pub fn parse_into(text: &str, b: &mut ExprBuilder) -> Result<NodeId, ParseError> {
    let mut s = Scanner {
        text: text.as_bytes(),
        pos: 0,
    };
    let root = expr(&mut s, b)?;
    if s.peek().is_some() {
        return Err(ParseError::new(s.pos, "unexpected trailing input"));
    }
    Ok(root)
}

fn expr(s: &mut Scanner, b: &mut ExprBuilder) -> Result<NodeId, ParseError> {
    let mut lhs = term(s, b)?;
    loop {
        match s.peek() {
            Some(b'+') => {
                s.pos += 1;
                let rhs = term(s, b)?;
                lhs = b.add(lhs, rhs);
            }
            Some(b'-') => {
                s.pos += 1;
                let rhs = term(s, b)?;
                lhs = b.sub(lhs, rhs);
            }
            _ => return Ok(lhs),
        }
    }
}

fn term(s: &mut Scanner, b: &mut ExprBuilder) -> Result<NodeId, ParseError> {
    let mut lhs = factor(s, b)?;
    while let Some(b'*') = s.peek() {
        s.pos += 1;
        let rhs = factor(s, b)?;
        lhs = b.mul(lhs, rhs);
    }
    Ok(lhs)
}

fn factor(s: &mut Scanner, b: &mut ExprBuilder) -> Result<NodeId, ParseError> {
    let base_id = base(s, b)?;
    if let Some(b'^') = s.peek() {
        s.pos += 1;
        s.skip_ws();
        if let Some(b'-') = s.text.get(s.pos).copied() {
            return Err(ParseError::new(
                s.pos,
                "exponent must be a nonnegative integer",
            ));
        }
        let e = s.nat()?;
        return Ok(b.pow(base_id, e));
    }
    Ok(base_id)
}

fn base(s: &mut Scanner, b: &mut ExprBuilder) -> Result<NodeId, ParseError> {
    match s.peek() {
        Some(b'(') => {
            s.pos += 1;
            let inner = expr(s, b)?;
            s.expect(b')')?;
            Ok(inner)
        }
        Some(b'x') => {
            s.pos += 1;
            let idx_pos = s.pos;
            match s.nat_here() {
                None => Ok(b.var(1)),
                Some(n) => {
                    let idx = u32::try_from(&n).map_err(|_| {
                        ParseError::new(idx_pos, "variable index out of range")
                    })?;
                    if idx == 0 {
                        return Err(ParseError::new(idx_pos, "variable indices start at 1"));
                    }
                    Ok(b.var(idx))
                }
            }
        }
        Some(c) if c == b'-' || c.is_ascii_digit() => {
            let neg = c == b'-';
            if neg {
                s.pos += 1;
                s.skip_ws();
            }
            let num_pos = s.pos;
            let numer = s.nat_here().ok_or_else(|| {
                ParseError::new(num_pos, "expected a number after '-'")
            })?;
            let denom = if let Some(b'/') = s.peek() {
                s.pos += 1;
                let den_pos = s.pos;
                let d = s.nat()?;
                if d.is_zero() {
                    return Err(ParseError::new(den_pos, "zero denominator in constant"));
                }
                d
            } else {
                BigUint::from(1u32)
            };
            let mut q = BigRational::new(BigInt::from(numer), BigInt::from(denom));
            if neg {
                q = -q;
            }
            Ok(b.constant(q))
        }
        Some(c) if c.is_ascii_alphabetic() => Err(ParseError::new(
            s.pos,
            format!("unknown identifier starting with '{}'", c as char),
        )),
        _ => Err(ParseError::new(
            s.pos,
            "expected '(', a variable, or a number",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::super::Expression;
    use super::*;

    #[test]
    fn precedence_pow_over_mul_over_add() {
        let e = Expression::parse("2*x^3 + 1").unwrap();
        let v = e
            .eval(&[BigRational::from(BigInt::from(2))])
            .unwrap();
        assert_eq!(v[0], BigRational::from(BigInt::from(17)));
    }

    #[test]
    fn whitespace_is_insignificant() {
        let a = Expression::parse("2*x^3+1").unwrap();
        let b = Expression::parse("  2 * x ^ 3 + 1 ").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn error_positions_are_reported() {
        let err = Expression::parse("2*x^").unwrap_err();
        assert_eq!(err.pos, 4);
        let err = Expression::parse("x + y").unwrap_err();
        assert_eq!(err.pos, 4);
        let err = Expression::parse("x^-2").unwrap_err();
        assert_eq!(err.pos, 2);
        let err = Expression::parse("(x+1").unwrap_err();
        assert_eq!(err.pos, 4);
        let err = Expression::parse("1/0").unwrap_err();
        assert_eq!(err.pos, 2);
        let err = Expression::parse("x0").unwrap_err();
        assert_eq!(err.pos, 1);
    }

    #[test]
    fn negative_literal_in_factor_position() {
        let e = Expression::parse("3*-5").unwrap();
        let v = e.eval(&[BigRational::zero()]).unwrap();
        assert_eq!(v[0], BigRational::from(BigInt::from(-15)));
    }

    #[test]
    fn x_means_x1() {
        let a = Expression::parse("x").unwrap();
        let b = Expression::parse("x1").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unbounded_exponents_parse() {
        let e = Expression::parse("x^123456789012345678901234567890").unwrap();
        assert_eq!(
            e.degree_bound()[0],
            BigUint::parse_bytes(b"123456789012345678901234567890", 10).unwrap()
        );
    }

    #[test]
    fn no_implicit_multiplication() {
        assert!(Expression::parse("2x").is_err());
    }
}
