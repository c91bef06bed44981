//! Intervals with exact rational endpoints.
//!
//! All bound formulas are evaluated through these enclosures; the only
//! sources of width are the series enclosures of `e` and `ln`, both with
//! explicit remainder bounds. Field operations on exact endpoints are exact,
//! so evaluation order cannot change a result — a property the bound module
//! tests rely on.

use super::dyadic::{Direction, Dyadic};
use super::NumericError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn point(q: BigRational) -> Self {
        RatInterval {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::point(BigRational::from(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Self::point(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::point(BigRational::one())
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        Self::new(lo, hi)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_negative() {
            Self::new(&self.hi * q, &self.lo * q)
        } else {
            Self::new(&self.lo * q, &self.hi * q)
        }
    }

    pub fn recip(&self) -> Result<Self, NumericError> {
        if self.contains_zero() {
            return Err(NumericError::DivisionByZero);
        }
        Ok(Self::new(self.hi.recip(), self.lo.recip()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, NumericError> {
        Ok(self.mul(&other.recip()?))
    }

    /// Integer power with sign care; exact range on each monotone piece.
    pub fn pow(&self, k: u32) -> Self {
        if k == 0 {
            return Self::one();
        }
        let lo_k = pow_rat(&self.lo, k);
        let hi_k = pow_rat(&self.hi, k);
        if k % 2 == 1 || !self.lo.is_negative() {
            Self::new(lo_k, hi_k)
        } else if !self.hi.is_positive() {
            Self::new(hi_k, lo_k)
        } else {
            // straddles zero, even power
            Self::new(BigRational::zero(), lo_k.max(hi_k))
        }
    }

    /// Outward dyadic rounding of both endpoints to `prec` bits.
    pub fn compress(&self, prec: u32) -> Self {
        Self::new(
            Dyadic::round_rational(&self.lo, prec, Direction::Down).to_rational(),
            Dyadic::round_rational(&self.hi, prec, Direction::Up).to_rational(),
        )
    }
}

fn pow_rat(q: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    let mut base = q.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc *= &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    acc
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// atanh-series enclosure of ln(m) for an exact rational m in [1, 2):
/// ln m = 2·Σ t^(2i+1)/(2i+1) with t = (m−1)/(m+1) in [0, 1/3),
/// remainder after n terms in [0, 2·t^(2n+1)/((2n+1)(1−t²))].
fn ln_mantissa(m: &BigRational, prec: u32) -> RatInterval {
    debug_assert!(*m >= BigRational::one() && *m < rat(2, 1));
    let p = prec + 8;
    // with t <= 1/3 the remainder is below 3^-(2n+1)·9/4; n terms suffice
    let n = (p as usize + 2) / 3 + 2;
    let one = BigRational::one();
    let t = (m - &one) / (m + &one);
    if t.is_zero() {
        return RatInterval::point(BigRational::zero());
    }
    let t2 = &t * &t;
    let mut acc = t.clone();
    let mut sum = BigRational::zero();
    for i in 0..n {
        sum += &acc / BigRational::from(BigInt::from(2 * i as i64 + 1));
        acc *= &t2;
    }
    // acc = t^(2n+1) now
    let rem = &acc * rat(2, 1) / (BigRational::from(BigInt::from(2 * n as i64 + 1)) * (&one - &t2));
    let lo = &sum * rat(2, 1);
    let hi = &lo + rem;
    RatInterval::new(lo, hi)
}

/// Enclosure of ln 2 = ln(3/2) + ln(4/3).
pub fn ln2_enclosure(prec: u32) -> RatInterval {
    ln_mantissa(&rat(3, 2), prec)
        .add(&ln_mantissa(&rat(4, 3), prec))
        .compress(prec + 16)
}

/// Enclosure of e by the Taylor series of exp at 1 with remainder < 2/(n+1)!.
pub fn euler_enclosure(prec: u32) -> RatInterval {
    let p = prec + 8;
    let mut fact = BigInt::one();
    let mut n = 0u32;
    let threshold = BigInt::one() << (p as u64 + 1);
    while fact < threshold {
        n += 1;
        fact *= BigInt::from(n);
    }
    let mut sum = BigRational::zero();
    let mut f = BigInt::one();
    for k in 0..=n {
        if k > 0 {
            f *= BigInt::from(k);
        }
        sum += BigRational::new(BigInt::one(), f.clone());
    }
    let rem = BigRational::new(BigInt::from(2), &f * BigInt::from(n + 1));
    RatInterval::new(sum.clone(), sum + rem).compress(prec + 16)
}

/// Directional ln of an exact positive rational. The result interval always
/// encloses the true ln; callers pick the endpoint they need.
pub fn ln_rat_enclosure(q: &BigRational, prec: u32) -> Result<RatInterval, NumericError> {
    if !q.is_positive() {
        return Err(NumericError::LogNonPositive);
    }
    // outward-round the argument to a compact dyadic first; ln is monotone,
    // so the widened argument still encloses the true value
    let lo_d = Dyadic::round_rational(q, prec + 16, Direction::Down);
    let hi_d = Dyadic::round_rational(q, prec + 16, Direction::Up);
    let ln2 = ln2_enclosure(prec);
    let lo = ln_dyadic(&lo_d, prec, &ln2);
    let hi = ln_dyadic(&hi_d, prec, &ln2);
    // compact endpoints: series sums carry huge power-of-two denominators
    // that would otherwise snowball through every downstream product
    Ok(RatInterval::new(lo.lo, hi.hi).compress(prec + 16))
}

fn ln_dyadic(x: &Dyadic, prec: u32, ln2: &RatInterval) -> RatInterval {
    debug_assert!(!x.is_zero() && !x.is_negative());
    let q = x.to_rational();
    // write q = m · 2^k with m in [1, 2)
    let bits = q.numer().bits() as i64 - q.denom().bits() as i64;
    let mut k = bits;
    let two = rat(2, 1);
    let mut m = &q / pow2(k);
    while m >= two {
        m /= &two;
        k += 1;
    }
    while m < BigRational::one() {
        m *= &two;
        k -= 1;
    }
    let base = ln_mantissa(&m, prec);
    let shift = if k >= 0 {
        ln2.scale(&BigRational::from(BigInt::from(k)))
    } else {
        ln2.scale(&BigRational::from(BigInt::from(k)))
    };
    base.add(&shift)
}

fn pow2(k: i64) -> BigRational {
    if k >= 0 {
        BigRational::from(BigInt::one() << k as u64)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-k) as u64)
    }
}

/// Enclosure of ln over an interval argument (requires lo > 0).
pub fn ln_interval(x: &RatInterval, prec: u32) -> Result<RatInterval, NumericError> {
    if !x.lo.is_positive() {
        return Err(NumericError::LogNonPositive);
    }
    let lo = ln_rat_enclosure(&x.lo, prec)?;
    let hi = ln_rat_enclosure(&x.hi, prec)?;
    Ok(RatInterval::new(lo.lo, hi.hi))
}
