//! Formula terms and their directed-rounding evaluation.

use super::interval::{euler_enclosure, ln_interval, RatInterval};
use super::{NumericError, UpperReal};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

/// An arithmetic term over {+, −, ×, ÷, integer power, log base b, ln,
/// factorial, binomial} with exact rational leaves and the constant e.
#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Rat(BigRational),
    /// Euler's constant e.
    E,
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Div(Box<Term>, Box<Term>),
    Pow(Box<Term>, u32),
    Ln(Box<Term>),
    /// log_base(arg)
    Log(Box<Term>, Box<Term>),
    Factorial(u32),
    Binomial(u32, u32),
}

impl Term {
    pub fn int(n: i64) -> Term {
        Term::Rat(BigRational::from(BigInt::from(n)))
    }

    pub fn rat(n: i64, d: i64) -> Term {
        Term::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn add(self, other: Term) -> Term {
        Term::Add(Box::new(self), Box::new(other))
    }

    pub fn sub(self, other: Term) -> Term {
        Term::Sub(Box::new(self), Box::new(other))
    }

    pub fn mul(self, other: Term) -> Term {
        Term::Mul(Box::new(self), Box::new(other))
    }

    pub fn div(self, other: Term) -> Term {
        Term::Div(Box::new(self), Box::new(other))
    }

    pub fn pow(self, k: u32) -> Term {
        Term::Pow(Box::new(self), k)
    }

    pub fn ln(self) -> Term {
        Term::Ln(Box::new(self))
    }

    pub fn log(base: Term, arg: Term) -> Term {
        Term::Log(Box::new(base), Box::new(arg))
    }

    /// Enclosure of the term's exact value.
    pub fn eval_interval(&self, prec: u32) -> Result<RatInterval, NumericError> {
        match self {
            Term::Rat(q) => Ok(RatInterval::point(q.clone())),
            Term::E => Ok(euler_enclosure(prec)),
            Term::Add(a, b) => Ok(a.eval_interval(prec)?.add(&b.eval_interval(prec)?)),
            Term::Sub(a, b) => Ok(a.eval_interval(prec)?.sub(&b.eval_interval(prec)?)),
            Term::Mul(a, b) => Ok(a.eval_interval(prec)?.mul(&b.eval_interval(prec)?)),
            Term::Div(a, b) => a.eval_interval(prec)?.div(&b.eval_interval(prec)?),
            Term::Pow(a, k) => Ok(a.eval_interval(prec)?.pow(*k)),
            Term::Ln(a) => ln_interval(&a.eval_interval(prec)?, prec),
            Term::Log(base, arg) => {
                let lb = ln_interval(&base.eval_interval(prec)?, prec)?;
                let la = ln_interval(&arg.eval_interval(prec)?, prec)?;
                la.div(&lb)
            }
            Term::Factorial(n) => Ok(RatInterval::point(BigRational::from(BigInt::from(
                factorial(*n),
            )))),
            Term::Binomial(n, k) => Ok(RatInterval::point(BigRational::from(BigInt::from(
                binomial(*n, *k),
            )))),
        }
    }
}

pub fn factorial(n: u32) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=n.max(1) {
        acc *= BigUint::from(k);
    }
    acc
}

pub fn binomial(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Validated upper evaluation: the returned value is ≥ the exact value of the
/// formula, rounded up to `prec` mantissa bits.
pub fn up_eval(formula: &Term, prec: u32) -> Result<UpperReal, NumericError> {
    let iv = formula.eval_interval(prec)?;
    Ok(UpperReal::from_interval_hi(&iv, prec))
}
