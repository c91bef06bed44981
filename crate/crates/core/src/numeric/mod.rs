//! Exact big-integer/rational arithmetic, p-adic valuations, and validated
//! directed-rounding evaluation of real-valued bound formulas.
//!
//! Coefficients live in ℚ as [`num_rational::BigRational`] (always normalized,
//! positive denominator). Non-rational values — e, logarithms, and anything
//! built from them — are evaluated as [`interval::RatInterval`] enclosures and
//! surface as [`UpperReal`]: a binary float guaranteed to be ≥ the exact value.

pub mod dyadic;
pub mod interval;
pub mod primes;
pub mod term;
pub mod valuation;

use dyadic::{Direction, Dyadic};
use interval::RatInterval;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use std::cmp::Ordering;
use std::fmt;

pub use term::{binomial, factorial, up_eval, Term};
pub use valuation::{val_p, Order, Valuation};

/// Default significand precision (bits) for bound evaluation.
pub const DEFAULT_PRECISION: u32 = 96;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NumericError {
    /// val_p called with a composite or unit modulus.
    NotPrime(BigUint),
    /// log of a non-positive (or not provably positive) argument.
    LogNonPositive,
    /// division by zero (or by an enclosure containing zero).
    DivisionByZero,
    /// floor_bound of a negative value.
    NegativeBound,
}

impl fmt::Display for NumericError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericError::NotPrime(p) => write!(f, "{p} is not prime"),
            NumericError::LogNonPositive => write!(f, "logarithm of non-positive argument"),
            NumericError::DivisionByZero => write!(f, "division by zero"),
            NumericError::NegativeBound => write!(f, "negative value where a bound was expected"),
        }
    }
}

impl std::error::Error for NumericError {}

/// A validated real upper bound: `value ≥ exact result` for every operation
/// that constructed it, stored as a binary float with `precision` mantissa
/// bits. Increasing the precision can only shrink the value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpperReal {
    value: Dyadic,
    precision: u32,
}

impl UpperReal {
    pub(crate) fn from_interval_hi(iv: &RatInterval, prec: u32) -> Self {
        UpperReal {
            value: Dyadic::round_rational(&iv.hi, prec, Direction::Up),
            precision: prec,
        }
    }

    /// Exact upper bound from a rational (no rounding beyond `prec` bits).
    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        UpperReal {
            value: Dyadic::round_rational(q, prec, Direction::Up),
            precision: prec,
        }
    }

    /// The stored value, exactly.
    pub fn to_rational(&self) -> BigRational {
        self.value.to_rational()
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative()
    }

    /// Decimal rendering that rounds up in the last digit, so the printed
    /// number is still a valid upper bound.
    pub fn to_decimal_up(&self, significant_digits: usize) -> String {
        self.value.to_decimal_up(significant_digits)
    }
}

impl PartialOrd for UpperReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.value.cmp_value(&other.value))
    }
}

impl fmt::Display for UpperReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_up(18))
    }
}

/// Largest integer ≤ the stored upper value. Root counts are integers, so
/// `count ≤ B` implies `count ≤ ⌊B⌋`. Rejects negative input.
pub fn floor_bound(b: &UpperReal) -> Result<BigInt, NumericError> {
    if b.is_negative() {
        return Err(NumericError::NegativeBound);
    }
    Ok(b.value.floor())
}
