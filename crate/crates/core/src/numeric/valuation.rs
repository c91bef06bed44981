//! Exact p-adic valuations of rationals.

use super::primes::is_prime;
use super::NumericError;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use std::fmt;

/// The p-adic order of a value: `Finite(k)` means exactly p^k divides it,
/// `Infinite` is the valuation of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Order {
    Finite(i64),
    Infinite,
}

impl Order {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Order::Infinite)
    }

    /// order(ab) = order(a) + order(b)
    pub fn add(self, other: Order) -> Order {
        match (self, other) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a + b),
            _ => Order::Infinite,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => write!(f, "+inf"),
        }
    }
}

/// A p-adic valuation: the prime together with the order of the value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Valuation {
    pub prime: BigUint,
    pub order: Order,
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v_{}= {}", self.prime, self.order)
    }
}

/// Exact order of a nonzero integer at prime `p` (no primality check here).
pub fn int_order(n: &BigInt, p: &BigUint) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p.clone());
    let mut m = n.clone();
    let mut k = 0i64;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(k);
        }
        m = q;
        k += 1;
    }
}

/// The exact p-adic valuation of a rational; `Order::Infinite` for zero.
///
/// Rejects non-prime `p`.
pub fn val_p(x: &BigRational, p: &BigUint) -> Result<Valuation, NumericError> {
    if !is_prime(p) {
        return Err(NumericError::NotPrime(p.clone()));
    }
    if x.is_zero() {
        return Ok(Valuation {
            prime: p.clone(),
            order: Order::Infinite,
        });
    }
    let vn = int_order(x.numer(), p).expect("nonzero numerator");
    let vd = int_order(x.denom(), p).expect("nonzero denominator");
    Ok(Valuation {
        prime: p.clone(),
        order: Order::Finite(vn - vd),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn val_2_of_12_is_2() {
        let v = val_p(&rat(12, 1), &BigUint::from(2u32)).unwrap();
        assert_eq!(v.order, Order::Finite(2));
    }

    #[test]
    fn val_of_zero_is_infinite() {
        let v = val_p(&BigRational::zero(), &BigUint::from(2u32)).unwrap();
        assert_eq!(v.order, Order::Infinite);
    }

    #[test]
    fn val_3_of_5_ninths_is_minus_2() {
        let v = val_p(&rat(5, 9), &BigUint::from(3u32)).unwrap();
        assert_eq!(v.order, Order::Finite(-2));
    }

    #[test]
    fn non_prime_rejected() {
        assert!(val_p(&BigRational::one(), &BigUint::from(6u32)).is_err());
        assert!(val_p(&BigRational::one(), &BigUint::from(1u32)).is_err());
    }

    #[test]
    fn multiplicativity_on_seeded_rationals() {
        // val_p(xy) = val_p(x) + val_p(y) for 1000 pseudo-random rationals
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for &p in &[2u32, 3, 5, 7] {
            let p = BigUint::from(p);
            for _ in 0..250 {
                let a = (next() % 10_000) as i64 - 5_000;
                let b = (next() % 999) as i64 + 1;
                let c = (next() % 10_000) as i64 - 5_000;
                let d = (next() % 999) as i64 + 1;
                let x = rat(a, b);
                let y = rat(c, d);
                let lhs = val_p(&(&x * &y), &p).unwrap().order;
                let rhs = val_p(&x, &p).unwrap().order.add(val_p(&y, &p).unwrap().order);
                assert_eq!(lhs, rhs, "p={p} x={x} y={y}");
                // ultrametric: v(x+y) >= min(v(x), v(y))
                let s = val_p(&(&x + &y), &p).unwrap().order;
                let mn = val_p(&x, &p).unwrap().order.min(val_p(&y, &p).unwrap().order);
                assert!(s >= mn);
            }
        }
    }
}
