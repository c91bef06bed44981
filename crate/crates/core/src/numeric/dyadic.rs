//! Binary floating values `mantissa · 2^exp` with directed rounding.
//!
//! This is the storage format behind [`super::UpperReal`]: arbitrary-precision
//! mantissa, signed exponent, and explicit round-up / round-down conversions
//! from exact rationals. No operation here ever rounds to nearest.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// toward +∞
    Up,
    /// toward −∞
    Down,
}

/// `mantissa * 2^exp`, normalized so the mantissa is odd (or the value is 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    mantissa: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::normalized(n, 0)
    }

    fn normalized(mut mantissa: BigInt, mut exp: i64) -> Self {
        if mantissa.is_zero() {
            return Self::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            mantissa >>= tz;
            exp += tz as i64;
        }
        Dyadic { mantissa, exp }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from(&self.mantissa << self.exp as u64)
        } else {
            BigRational::new(self.mantissa.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Round an exact rational to at most `prec` mantissa bits in the given
    /// direction. `prec ≥ 1`.
    pub fn round_rational(q: &BigRational, prec: u32, dir: Direction) -> Self {
        assert!(prec >= 1);
        if q.is_zero() {
            return Self::zero();
        }
        let num = q.numer();
        let den = q.denom(); // > 0
        // e = floor(log2 |q|): first estimate from bit lengths, then correct.
        let mut e = num.bits() as i64 - den.bits() as i64;
        // |q| >= 2^e  iff  |num| >= den << e (for e >= 0), sim. below
        let ge = |e: i64| -> bool {
            if e >= 0 {
                num.magnitude() >= &(den.magnitude() << e as u64)
            } else {
                &(num.magnitude() << (-e) as u64) >= den.magnitude()
            }
        };
        if ge(e + 1) {
            e += 1;
        } else if !ge(e) {
            e -= 1;
        }
        debug_assert!(ge(e) && !ge(e + 1));
        // mantissa = q / 2^s with s = e - prec + 1, rounded directionally
        let s = e - prec as i64 + 1;
        let (n_sc, d_sc) = if s >= 0 {
            (num.clone(), den << s as u64)
        } else {
            (num << (-s) as u64, den.clone())
        };
        let m = match dir {
            Direction::Down => n_sc.div_floor(&d_sc),
            Direction::Up => n_sc.div_ceil(&d_sc),
        };
        Self::normalized(m, s)
    }

    /// Largest integer ≤ value.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mantissa << self.exp as u64
        } else {
            self.mantissa.div_floor(&(BigInt::one() << (-self.exp) as u64))
        }
    }

    pub fn cmp_value(&self, other: &Dyadic) -> Ordering {
        match (self.mantissa.sign(), other.mantissa.sign()) {
            (Sign::Minus, Sign::NoSign | Sign::Plus) => return Ordering::Less,
            (Sign::NoSign, Sign::Plus) => return Ordering::Less,
            (Sign::Plus, Sign::NoSign | Sign::Minus) => return Ordering::Greater,
            (Sign::NoSign, Sign::Minus) => return Ordering::Greater,
            (Sign::NoSign, Sign::NoSign) => return Ordering::Equal,
            _ => {}
        }
        // same nonzero sign: align exponents
        let e = self.exp.min(other.exp);
        let a = &self.mantissa << (self.exp - e) as u64;
        let b = &other.mantissa << (other.exp - e) as u64;
        a.cmp(&b)
    }

    /// Decimal rendering that never under-prints: the printed number is ≥ the
    /// stored value (rounded up in the last printed digit; exact values print
    /// exactly). `sig` is the number of significant digits.
    pub fn to_decimal_up(&self, sig: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        // decimal exponent d: 10^d <= |v| < 10^(d+1)
        let v = self.to_rational();
        let av = v.abs();
        let mut d: i64 = {
            // crude estimate from binary magnitude, then correct
            let e2 = self.mantissa.bits() as i64 + self.exp;
            (e2 as f64 * std::f64::consts::LOG10_2).floor() as i64
        };
        let pow10 = |k: i64| -> BigRational {
            let ten = BigInt::from(10u32);
            if k >= 0 {
                BigRational::from(ten.pow(k as u32))
            } else {
                BigRational::new(BigInt::one(), ten.pow((-k) as u32))
            }
        };
        while av >= pow10(d + 1) {
            d += 1;
        }
        while av < pow10(d) {
            d -= 1;
        }
        // N = value * 10^(sig-1-d), rounded toward the safe side
        let scaled = &v * pow10(sig as i64 - 1 - d);
        let n = if neg {
            scaled.floor().to_integer()
        } else {
            scaled.ceil().to_integer()
        };
        let mut digits = n.magnitude().to_string();
        // rounding may carry into one extra digit (e.g. 999.9 -> 1000)
        if digits.len() > sig {
            d += digits.len() as i64 - sig as i64;
            digits.truncate(sig);
        }
        let sign = if neg { "-" } else { "" };
        if (-4..16).contains(&d) {
            // positional
            if d >= 0 {
                let ip = d as usize + 1;
                if ip >= digits.len() {
                    let zeros = "0".repeat(ip - digits.len());
                    format!("{sign}{digits}{zeros}")
                } else {
                    let frac = digits.split_off(ip);
                    let frac = frac.trim_end_matches('0');
                    if frac.is_empty() {
                        format!("{sign}{digits}")
                    } else {
                        format!("{sign}{digits}.{frac}")
                    }
                }
            } else {
                let zeros = "0".repeat((-d - 1) as usize);
                let trimmed = digits.trim_end_matches('0');
                format!("{sign}0.{zeros}{trimmed}")
            }
        } else {
            let (head, tail) = digits.split_at(1);
            let tail = tail.trim_end_matches('0');
            if tail.is_empty() {
                format!("{sign}{head}e{d}")
            } else {
                format!("{sign}{head}.{tail}e{d}")
            }
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_up(20))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn round_directions_bracket_the_value() {
        let q = rat(1, 3);
        let up = Dyadic::round_rational(&q, 16, Direction::Up);
        let down = Dyadic::round_rational(&q, 16, Direction::Down);
        assert!(up.to_rational() >= q);
        assert!(down.to_rational() <= q);
        assert!(up.to_rational() - down.to_rational() < rat(1, 1 << 15));
    }

    #[test]
    fn exact_dyadics_round_exactly() {
        for v in [rat(1, 2), rat(-7, 8), rat(5, 1), rat(0, 1)] {
            let up = Dyadic::round_rational(&v, 8, Direction::Up);
            assert_eq!(up.to_rational(), v);
        }
    }

    #[test]
    fn negative_rounding_toward_directions() {
        let q = rat(-1, 3);
        let up = Dyadic::round_rational(&q, 12, Direction::Up);
        let down = Dyadic::round_rational(&q, 12, Direction::Down);
        assert!(up.to_rational() >= q);
        assert!(down.to_rational() <= q);
    }

    #[test]
    fn floor_matches_rational_floor() {
        for (n, d) in [(7, 2), (-7, 2), (35, 1), (2999, 1000), (-1, 8)] {
            let q = rat(n, d);
            let x = Dyadic::round_rational(&q, 48, Direction::Up);
            assert_eq!(x.floor(), q.floor().to_integer(), "{n}/{d}");
        }
    }

    #[test]
    fn higher_precision_round_up_never_higher() {
        let q = rat(355, 113);
        let coarse = Dyadic::round_rational(&q, 24, Direction::Up);
        let fine = Dyadic::round_rational(&q, 48, Direction::Up);
        assert!(fine.cmp_value(&coarse) != Ordering::Greater);
        assert!(fine.to_rational() >= q);
    }

    #[test]
    fn decimal_up_is_an_upper_bound() {
        let q = rat(1, 3);
        let x = Dyadic::round_rational(&q, 64, Direction::Up);
        let s = x.to_decimal_up(6);
        assert_eq!(s, "0.333334");
        let half = Dyadic::round_rational(&rat(1, 2), 8, Direction::Up);
        assert_eq!(half.to_decimal_up(6), "0.5");
        let big = Dyadic::round_rational(&rat(6471489, 1), 64, Direction::Up);
        assert_eq!(big.to_decimal_up(9), "6471489");
    }
}
