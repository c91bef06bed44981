//! Primality testing and integer factorization with an explicit work budget.
//!
//! Deterministic Miller–Rabin below 3.3·10²⁴, trial division to 10⁶, then
//! Brent's variant of Pollard rho. Everything here is deterministic so that
//! repeated runs behave identically.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Divisor enumeration refused: the coefficient was too hard to factor
/// within the iteration budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorBudgetExceeded {
    pub remaining: BigUint,
}

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Miller–Rabin witnesses: deterministic for n < 3,317,044,064,679,887,385,961,981.
const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

pub fn is_prime(n: &BigUint) -> bool {
    if n < &BigUint::from(2u32) {
        return false;
    }
    for &p in &SMALL_PRIMES {
        let p = BigUint::from(p);
        if n == &p {
            return true;
        }
        if n.is_multiple_of(&p) {
            return false;
        }
    }
    // n-1 = d * 2^s with d odd
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for &a in &MR_BASES {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Pollard rho (Brent's cycle detection) with a fixed iteration budget.
/// Returns a nontrivial factor of composite odd `n`, or None on budget.
fn pollard_rho(n: &BigUint, max_iters: u64) -> Option<BigUint> {
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if n.is_multiple_of(&two) {
        return Some(two);
    }
    // deterministic restart schedule over the additive constant
    for c in 1u32..=8 {
        let c = BigUint::from(c);
        let mut y = two.clone();
        let mut iters = 0u64;
        let m = 64u64;
        let (mut r, mut q, mut g) = (1u64, one.clone(), one.clone());
        let (mut x, mut ys) = (y.clone(), y.clone());
        while g.is_one() && iters < max_iters {
            x = y.clone();
            for _ in 0..r {
                y = (&y * &y + &c) % n;
            }
            let mut k = 0u64;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = (&y * &y + &c) % n;
                    let diff = if x > y { &x - &y } else { &y - &x };
                    if diff.is_zero() {
                        break;
                    }
                    q = (&q * &diff) % n;
                }
                g = q.gcd(n);
                k += m;
                iters += m;
            }
            r *= 2;
        }
        if g == *n {
            // backtrack
            loop {
                ys = (&ys * &ys + &c) % n;
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return Some(g);
        }
    }
    None
}

/// Full factorization of `n ≥ 1`: trial division to 10⁶, Pollard rho above.
pub fn factorize(n: &BigUint, rho_budget: u64) -> Result<BTreeMap<BigUint, u32>, FactorBudgetExceeded> {
    let mut out = BTreeMap::new();
    let mut n = n.clone();
    if n.is_zero() {
        return Ok(out);
    }
    let mut d = 2u64;
    while d <= 1_000_000 && BigUint::from(d).pow(2) <= n {
        let bd = BigUint::from(d);
        while n.is_multiple_of(&bd) {
            *out.entry(bd.clone()).or_insert(0) += 1;
            n /= &bd;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            *out.entry(m).or_insert(0) += 1;
            continue;
        }
        match pollard_rho(&m, rho_budget) {
            Some(f) => {
                stack.push(&m / &f);
                stack.push(f);
            }
            None => return Err(FactorBudgetExceeded { remaining: m }),
        }
    }
    Ok(out)
}

/// All positive divisors of `n`, capped at `max_count` (budget failure beyond).
pub fn divisors(n: &BigUint, rho_budget: u64, max_count: usize) -> Result<Vec<BigUint>, FactorBudgetExceeded> {
    let facs = factorize(n, rho_budget)?;
    let mut divs = vec![BigUint::one()];
    for (p, e) in &facs {
        let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
        for d in &divs {
            let mut pk = BigUint::one();
            for _ in 0..=*e {
                next.push(d * &pk);
                pk *= p;
            }
        }
        divs = next;
        if divs.len() > max_count {
            return Err(FactorBudgetExceeded { remaining: n.clone() });
        }
    }
    divs.sort();
    Ok(divs)
}
