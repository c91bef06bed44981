//! Dense univariate polynomials over ℤ: the engine behind the oracles.
//!
//! Everything is kept primitive (content divided out) so remainder sequences
//! stay within desk-scale coefficient growth. Signs are only ever scaled by
//! positive factors, which Sturm chains depend on.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// coeffs[i] = coefficient of x^i; no trailing zeros; empty vec = zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn from_i64(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Clear denominators and divide by content: same roots, primitive ℤ form.
    pub fn primitive_from_rationals(cs: &[BigRational]) -> Self {
        let mut lcm = BigInt::one();
        for c in cs {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = cs.iter().map(|c| (c * &lcm).to_integer()).collect();
        Self::new(ints).primitive()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    /// Divide by the (positive) content. The sign of the leading coefficient
    /// is preserved.
    pub fn primitive(&self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| c / &g).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(i + 1))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rat(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from(c.clone());
        }
        acc
    }

    pub fn neg(&self) -> Self {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Multiplicity of the root 0; strips x^k in place and returns k.
    pub fn strip_zero_root(&mut self) -> usize {
        let k = self
            .coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(0);
        if k > 0 {
            self.coeffs.drain(..k);
        }
        k
    }

    /// x^deg · f(1/x).
    pub fn reversed(&self) -> Self {
        let mut cs = self.coeffs.clone();
        cs.reverse();
        Self::new(cs)
    }

    /// Pseudo-remainder with a positive multiplier: |lc(b)|^(da-db+1) · a mod b.
    /// Pointwise signs agree with the exact rational remainder.
    pub fn pseudo_rem_abs(&self, b: &Self) -> Self {
        let db = b.degree().expect("pseudo_rem by zero");
        let mut r = self.coeffs.clone();
        let lc = b.leading().unwrap().abs();
        let sign_flip = b.leading().unwrap().is_negative();
        while r.len() > db {
            let da = r.len() - 1;
            let top = r.last().unwrap().clone();
            if top.is_zero() {
                r.pop();
                continue;
            }
            // r = |lc|·r − sign·top·x^(da−db)·b
            for c in r.iter_mut() {
                *c *= &lc;
            }
            let factor = if sign_flip { -top } else { top };
            for (j, bc) in b.coeffs.iter().enumerate() {
                let idx = da - db + j;
                r[idx] -= &factor * bc;
            }
            debug_assert!(r.last().unwrap().is_zero());
            r.pop();
        }
        Self::new(r)
    }

    /// Primitive gcd (positive leading coefficient) via a primitive PRS.
    pub fn gcd_poly(&self, other: &Self) -> Self {
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.is_zero() {
            return positive_lc(b);
        }
        if b.is_zero() {
            return positive_lc(a);
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let r = a.pseudo_rem_abs(&b).primitive();
            if r.is_zero() {
                return positive_lc(b);
            }
            a = b;
            b = r;
            if b.degree() == Some(0) {
                return IntPoly::new(vec![BigInt::one()]);
            }
        }
    }

    /// Exact quotient self / d (panics in debug if not exact): used where
    /// divisibility is guaranteed (squarefree decomposition).
    pub fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem_rational(d);
        debug_assert!(r.iter().all(|c| c.is_zero()), "inexact division");
        IntPoly::primitive_from_rationals(&q)
    }

    /// Rational long division: (quotient, remainder) as rational coefficients.
    pub fn div_rem_rational(&self, d: &Self) -> (Vec<BigRational>, Vec<BigRational>) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut rem: Vec<BigRational> = self
            .coeffs
            .iter()
            .map(|c| BigRational::from(c.clone()))
            .collect();
        if self.degree().is_none() || self.degree().unwrap() < dd {
            return (vec![], rem);
        }
        let dn = self.degree().unwrap();
        let lc = BigRational::from(d.leading().unwrap().clone());
        let mut q = vec![BigRational::zero(); dn - dd + 1];
        for k in (0..=dn - dd).rev() {
            let top = rem[k + dd].clone() / &lc;
            if top.is_zero() {
                continue;
            }
            q[k] = top.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                let sub = &top * BigRational::from(dc.clone());
                rem[k + j] -= sub;
            }
        }
        rem.truncate(dd);
        (q, rem)
    }

    /// Squarefree part: self / gcd(self, self').
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd_poly(&self.derivative());
        if g.degree() == Some(0) {
            return self.primitive();
        }
        self.primitive().div_exact(&g)
    }

    /// Yun's squarefree decomposition: [(a_i, i)] with f ~ Π a_i^i up to a
    /// constant, each a_i squarefree and pairwise coprime, deg a_i ≥ 1.
    ///
    /// The c/d sequences are tracked in exact rationals: rescaling them
    /// independently would break the loop invariant. Constant factors in the
    /// primitive gcds rescale c and d uniformly, which is harmless.
    pub fn yun_squarefree(&self) -> Vec<(IntPoly, u32)> {
        let f = self.primitive();
        let fp = f.derivative();
        let g = f.gcd_poly(&fp);
        if g.degree() == Some(0) {
            return if f.degree().is_some_and(|d| d >= 1) {
                vec![(f, 1)]
            } else {
                vec![]
            };
        }
        let mut out = Vec::new();
        let mut c = rat_div_exact(&rat_vec(&f), &g);
        let mut d = rat_sub(&rat_div_exact(&rat_vec(&fp), &g), &rat_derivative(&c));
        let mut i = 1u32;
        while rat_deg(&c).is_some_and(|dg| dg >= 1) {
            let a = IntPoly::primitive_from_rationals(&c)
                .gcd_poly(&IntPoly::primitive_from_rationals(&d));
            if a.degree().is_some_and(|dg| dg >= 1) {
                out.push((a.clone(), i));
            }
            c = rat_div_exact(&c, &a);
            d = rat_sub(&rat_div_exact(&d, &a), &rat_derivative(&c));
            i += 1;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        Self::new(out)
    }

    /// Number of distinct real roots via a Sturm chain on (−∞, ∞).
    /// The input must be squarefree.
    pub fn sturm_count_all(&self) -> usize {
        let deg = match self.degree() {
            None | Some(0) => return 0,
            Some(d) => d,
        };
        if deg == 1 {
            return 1;
        }
        let mut chain: Vec<IntPoly> = vec![self.primitive(), self.derivative().primitive()];
        loop {
            let n = chain.len();
            let r = chain[n - 2].pseudo_rem_abs(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.neg().primitive());
        }
        let sign_at_plus = |p: &IntPoly| p.leading().unwrap().sign();
        let sign_at_minus = |p: &IntPoly| {
            let s = p.leading().unwrap().sign();
            if p.degree().unwrap() % 2 == 1 {
                -s
            } else {
                s
            }
        };
        let variations = |signs: Vec<num_bigint::Sign>| {
            signs
                .windows(2)
                .filter(|w| w[0] != w[1])
                .count()
        };
        let v_minus = variations(chain.iter().map(sign_at_minus).collect());
        let v_plus = variations(chain.iter().map(sign_at_plus).collect());
        v_minus - v_plus
    }

    /// Resultant of self and other, by the classical Euclidean recursion.
    pub fn resultant(&self, other: &Self) -> BigRational {
        fn go(a: &[BigRational], b: &[BigRational]) -> BigRational {
            let da = a.len() - 1;
            if b.is_empty() {
                return BigRational::zero();
            }
            let db = b.len() - 1;
            if db == 0 {
                return pow_rat(&b[0], da as u32);
            }
            // remainder of a by b
            let mut r = a.to_vec();
            let lc = b[db].clone();
            for k in (0..=da.saturating_sub(db)).rev() {
                let top = r[k + db].clone() / &lc;
                if top.is_zero() {
                    continue;
                }
                for (j, bc) in b.iter().enumerate() {
                    let sub = &top * bc;
                    r[k + j] -= sub;
                }
            }
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
            let dr = r.len().checked_sub(1);
            let sign = if (da * db) % 2 == 1 {
                -BigRational::one()
            } else {
                BigRational::one()
            };
            match dr {
                None => BigRational::zero(),
                Some(dr) => {
                    sign * pow_rat(&lc, (da - dr) as u32) * go(b, &r)
                }
            }
        }
        if self.is_zero() || other.is_zero() {
            return BigRational::zero();
        }
        let a: Vec<BigRational> = self.coeffs.iter().map(|c| BigRational::from(c.clone())).collect();
        let b: Vec<BigRational> = other.coeffs.iter().map(|c| BigRational::from(c.clone())).collect();
        if self.degree() >= other.degree() {
            go(&a, &b)
        } else {
            let s = if (self.degree().unwrap() * other.degree().unwrap()) % 2 == 1 {
                -BigRational::one()
            } else {
                BigRational::one()
            };
            s * go(&b, &a)
        }
    }
}

fn pow_rat(q: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..k {
        acc *= q;
    }
    acc
}

fn rat_vec(p: &IntPoly) -> Vec<BigRational> {
    p.coeffs.iter().map(|c| BigRational::from(c.clone())).collect()
}

fn rat_deg(a: &[BigRational]) -> Option<usize> {
    a.len().checked_sub(1)
}

fn rat_derivative(a: &[BigRational]) -> Vec<BigRational> {
    if a.len() <= 1 {
        return vec![];
    }
    a[1..]
        .iter()
        .enumerate()
        .map(|(i, c)| c * BigRational::from(BigInt::from(i + 1)))
        .collect()
}

fn rat_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

/// Exact division by an integer polynomial (debug-asserts divisibility).
fn rat_div_exact(a: &[BigRational], d: &IntPoly) -> Vec<BigRational> {
    let dd = d.degree().expect("division by zero polynomial");
    let da = match rat_deg(a) {
        None => return vec![],
        Some(x) => x,
    };
    if da < dd {
        debug_assert!(a.iter().all(|c| c.is_zero()));
        return vec![];
    }
    let mut rem = a.to_vec();
    let lc = BigRational::from(d.leading().unwrap().clone());
    let mut q = vec![BigRational::zero(); da - dd + 1];
    for k in (0..=da - dd).rev() {
        let top = rem[k + dd].clone() / &lc;
        if top.is_zero() {
            continue;
        }
        q[k] = top.clone();
        for (j, dc) in d.coeffs.iter().enumerate() {
            let sub = &top * BigRational::from(dc.clone());
            rem[k + j] -= sub;
        }
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()), "inexact division");
    while q.last().is_some_and(|c| c.is_zero()) {
        q.pop();
    }
    q
}

fn positive_lc(p: IntPoly) -> IntPoly {
    match p.leading() {
        Some(lc) if lc.is_negative() => p.neg(),
        _ => p,
    }
}

/// p-adic order of a nonzero integer.
pub fn int_val(n: &BigInt, p: &BigUint) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p.clone());
    let mut m = n.clone();
    let mut k = 0u32;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        m = q;
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64(cs)
    }

    #[test]
    fn squarefree_part_examples() {
        // (x-1)^2 (x+2) = x^3 - 3x + 2 → (x-1)(x+2) = x^2 + x - 2
        let f = poly(&[2, -3, 0, 1]);
        assert_eq!(f.squarefree_part(), poly(&[-2, 1, 1]));
        // x^3 - x is already squarefree
        let f = poly(&[0, -1, 0, 1]);
        assert_eq!(f.squarefree_part(), poly(&[0, -1, 0, 1]));
        // x^4 → x
        let f = poly(&[0, 0, 0, 0, 1]);
        assert_eq!(f.squarefree_part(), poly(&[0, 1]));
    }

    #[test]
    fn yun_decomposition() {
        // (x-1)^2 (x+2)^3 x
        let f = poly(&[-1, 1]) // x-1
            .mul(&poly(&[-1, 1]))
            .mul(&poly(&[2, 1]))
            .mul(&poly(&[2, 1]))
            .mul(&poly(&[2, 1]))
            .mul(&poly(&[0, 1]));
        let parts = f.yun_squarefree();
        let find = |mult: u32| parts.iter().find(|(_, m)| *m == mult).map(|(p, _)| p.clone());
        assert_eq!(find(1), Some(poly(&[0, 1])));
        assert_eq!(find(2), Some(poly(&[-1, 1])));
        assert_eq!(find(3), Some(poly(&[2, 1])));
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(poly(&[-2, 0, 1]).sturm_count_all(), 2); // x^2-2
        assert_eq!(poly(&[1, 0, 1]).sturm_count_all(), 0); // x^2+1
        assert_eq!(poly(&[0, -1, 0, 1]).sturm_count_all(), 3); // x^3-x
        // Π (x-i), i=1..6
        let mut f = poly(&[1]);
        for i in 1..=6i64 {
            f = f.mul(&poly(&[-i, 1]));
        }
        assert_eq!(f.sturm_count_all(), 6);
        // degree-1
        assert_eq!(poly(&[5, 3]).sturm_count_all(), 1);
        // wide coefficient spread
        assert_eq!(poly(&[1, -1_000_000, 1]).sturm_count_all(), 2);
    }

    #[test]
    fn gcd_of_shared_factor() {
        let a = poly(&[-1, 1]).mul(&poly(&[1, 1])); // x^2-1
        let b = poly(&[-1, 1]).mul(&poly(&[3, 1])); // (x-1)(x+3)
        assert_eq!(a.gcd_poly(&b), poly(&[-1, 1]));
    }

    #[test]
    fn resultant_detects_common_roots() {
        let a = poly(&[-1, 0, 1]); // x^2-1
        let b = poly(&[-1, 1]); // x-1
        assert!(a.resultant(&b).is_zero());
        let c = poly(&[-2, 1]); // x-2
        assert_eq!(a.resultant(&c), BigRational::from(BigInt::from(3)));
        // res(f, f') of x^2-2: disc = 8, res = -lc·disc = ... just nonzero
        let f = poly(&[-2, 0, 1]);
        assert!(!f.resultant(&f.derivative()).is_zero());
    }

    #[test]
    fn strip_zero_root_counts_multiplicity() {
        let mut f = poly(&[0, 0, 0, 5, 1]);
        assert_eq!(f.strip_zero_root(), 3);
        assert_eq!(f, poly(&[5, 1]));
    }

    #[test]
    fn reversed_swaps_roots_with_reciprocals() {
        let f = poly(&[2, -1]); // 2 - x, root 2
        let r = f.reversed(); // -1 + 2x, root 1/2
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        assert!(r.eval_rat(&half).is_zero());
    }

    #[test]
    fn int_val_counts_prime_powers() {
        assert_eq!(int_val(&BigInt::from(12), &BigUint::from(2u32)), 2);
        assert_eq!(int_val(&BigInt::from(-27), &BigUint::from(3u32)), 3);
        assert_eq!(int_val(&BigInt::from(5), &BigUint::from(2u32)), 0);
    }
}
