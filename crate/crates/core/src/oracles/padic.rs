//! Distinct-root counting over ℚ_p.
//!
//! Valuation classes come from the Newton polygon (integer slopes only —
//! ℚ_p-rational roots have integer valuation; negative valuations go through
//! the reversed polynomial). Each class is normalized to unit roots of a
//! primitive integer polynomial and counted by residue branching: a residue
//! where the derivative stays a unit is certified by Hensel's lemma; otherwise
//! the class is shifted, scaled, and recursed. On squarefree input the
//! recursion provably terminates; the depth guard computes v_p(res(g, g'))
//! lazily and aborts with `DepthExceeded` only past twice that.

use super::unipoly::{int_val, IntPoly};
use super::OracleError;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

/// A certified p-adic root class: the unit part of the root is ≡ residue
/// (mod p^modulus_exp) and the root is p^valuation · unit.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct PadicRootClass {
    pub valuation: i64,
    pub residue: BigUint,
    pub modulus_exp: u32,
    pub hensel_level: u32,
}

#[derive(Debug, Clone)]
pub struct PadicCount {
    pub distinct: u64,
    pub classes: Vec<PadicRootClass>,
}

/// Residue enumeration is linear in p; beyond this the oracle refuses.
const MAX_ENUMERABLE_PRIME: u64 = 1 << 20;

const SOFT_DEPTH: u32 = 24;

struct Guard<'a> {
    base: &'a IntPoly,
    prime: &'a BigUint,
    cap: Option<u32>,
}

impl Guard<'_> {
    fn check(&mut self, depth: u32) -> Result<(), OracleError> {
        if depth <= SOFT_DEPTH {
            return Ok(());
        }
        let cap = match self.cap {
            Some(c) => c,
            None => {
                // termination certificate for squarefree input
                let res = self.base.resultant(&self.base.derivative());
                if res.is_zero() {
                    return Err(OracleError::DepthExceeded);
                }
                let v = int_val(res.numer(), self.prime) as i64
                    - int_val(res.denom(), self.prime) as i64;
                let c = 2 * v.max(0) as u32 + 8;
                self.cap = Some(c);
                c
            }
        };
        if depth > cap {
            return Err(OracleError::DepthExceeded);
        }
        Ok(())
    }
}

/// Count the distinct roots of squarefree `f` (nonzero constant term) in ℚ_p.
pub fn count_qp_distinct(f: &IntPoly, p: &BigUint) -> Result<PadicCount, OracleError> {
    debug_assert!(!f.constant_term().is_zero());
    if u64::try_from(p).map_or(true, |v| v > MAX_ENUMERABLE_PRIME) {
        return Err(OracleError::BudgetExceeded(format!(
            "prime {p} too large for residue enumeration"
        )));
    }
    let mut total = 0u64;
    let mut classes = Vec::new();
    // nonnegative root valuations from f's polygon
    for v in integer_valuations(f, p) {
        if v < 0 {
            continue;
        }
        let g = scale_by_prime_power(f, p, v as u32);
        let cnt = count_unit_roots(&g, p)?;
        total += cnt.distinct;
        for mut c in cnt.classes {
            c.valuation = v;
            classes.push(c);
        }
    }
    // negative valuations via the reversed polynomial: roots of rev are the
    // reciprocals, so valuation w > 0 of rev is valuation −w of f
    let rev = f.reversed();
    for w in integer_valuations(&rev, p) {
        if w <= 0 {
            continue;
        }
        let g = scale_by_prime_power(&rev, p, w as u32);
        let cnt = count_unit_roots(&g, p)?;
        total += cnt.distinct;
        for c in cnt.classes {
            let pk = pow_biguint(p, c.modulus_exp);
            let inv = mod_inverse(&c.residue, &pk).expect("unit residue");
            classes.push(PadicRootClass {
                valuation: -w,
                residue: inv,
                modulus_exp: c.modulus_exp,
                hensel_level: c.hensel_level,
            });
        }
    }
    Ok(PadicCount {
        distinct: total,
        classes,
    })
}

/// Root valuations (= −slopes) with integer value, from the lower Newton
/// polygon of (i, v_p(a_i)).
pub fn integer_valuations(f: &IntPoly, p: &BigUint) -> Vec<i64> {
    let pts: Vec<(i64, i64)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as i64, int_val(c, p) as i64))
        .collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for pt in pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // pop if (x2,y2) is above or on the segment (x1,y1)-(pt)
            if (y2 - y1) * (pt.0 - x1) >= (pt.1 - y1) * (x2 - x1) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut out = Vec::new();
    for w in hull.windows(2) {
        let (x1, y1) = w[0];
        let (x2, y2) = w[1];
        let dy = y1 - y2; // valuation = −slope
        let dx = x2 - x1;
        if dy % dx == 0 {
            out.push(dy / dx);
        }
    }
    out
}

/// f(p^v · u), divided by its p-content: unit roots u correspond to roots of
/// f of valuation exactly v.
fn scale_by_prime_power(f: &IntPoly, p: &BigUint, v: u32) -> IntPoly {
    // coefficient of u^i picks up p^(v·i)
    let step = BigInt::from(p.clone()).pow(v);
    let mut pw = BigInt::one();
    let mut scaled: Vec<BigInt> = Vec::with_capacity(f.coeffs().len());
    for c in f.coeffs() {
        scaled.push(c * &pw);
        pw *= &step;
    }
    let g = IntPoly::new(scaled);
    remove_p_content(&g, p)
}

fn remove_p_content(g: &IntPoly, p: &BigUint) -> IntPoly {
    let c = g
        .coeffs()
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| int_val(c, p))
        .min()
        .unwrap_or(0);
    if c == 0 {
        return g.clone();
    }
    let d = BigInt::from(p.clone()).pow(c);
    IntPoly::new(g.coeffs().iter().map(|x| x / &d).collect())
}

struct UnitCount {
    distinct: u64,
    classes: Vec<PadicRootClass>,
}

/// Count distinct unit roots (valuation 0) of primitive squarefree g in ℤ_p.
fn count_unit_roots(g: &IntPoly, p: &BigUint) -> Result<UnitCount, OracleError> {
    let mut guard = Guard {
        base: g,
        prime: p,
        cap: None,
    };
    let p_u64 = u64::try_from(p).expect("prime bounded by caller");
    let mut distinct = 0u64;
    let mut classes = Vec::new();
    for r in 1..p_u64 {
        let r = BigUint::from(r);
        count_in_class(
            g,
            p,
            &r,
            &BigUint::zero(),
            1,
            &mut guard,
            &mut distinct,
            &mut classes,
        )?;
    }
    Ok(UnitCount { distinct, classes })
}

/// Roots of g₀ in the class {x ≡ acc (mod p^level)} where the shifted
/// polynomial is `shifted(y) ~ g₀(acc + p^level·y)` up to p-content.
/// On entry `shifted` is evaluated at the last digit of acc.
#[allow(clippy::too_many_arguments)]
fn count_in_class(
    shifted: &IntPoly,
    p: &BigUint,
    digit: &BigUint,
    acc_prefix: &BigUint,
    level: u32,
    guard: &mut Guard,
    distinct: &mut u64,
    classes: &mut Vec<PadicRootClass>,
) -> Result<(), OracleError> {
    guard.check(level)?;
    let pb = BigInt::from(p.clone());
    let d = BigInt::from(digit.clone());
    let fd = shifted.eval(&d);
    if !fd.mod_floor(&pb).is_zero() {
        return Ok(());
    }
    // acc = acc_prefix + digit · p^(level-1)
    let p_lm1 = pow_biguint(p, level - 1);
    let acc = acc_prefix + digit * &p_lm1;
    let fpd = shifted.derivative().eval(&d);
    if !fpd.mod_floor(&pb).is_zero() {
        // simple root mod p: Hensel certifies exactly one root in this class;
        // refine two more digits for the reported residue
        *distinct += 1;
        let y = newton_lift(shifted, digit, p, 3);
        let residue = acc_prefix + y * &p_lm1;
        classes.push(PadicRootClass {
            valuation: 0, // caller sets
            residue: residue.mod_floor(&pow_biguint(p, level + 2)),
            modulus_exp: level + 2,
            hensel_level: level,
        });
        return Ok(());
    }
    // branch: h(y) = shifted(digit + p·y) / p^content, y over all residues
    let h = remove_p_content(&shift_linear(shifted, &d, &pb), p);
    let p_u64 = u64::try_from(p).expect("bounded");
    for t in 0..p_u64 {
        count_in_class(
            &h,
            p,
            &BigUint::from(t),
            &acc,
            level + 1,
            guard,
            distinct,
            classes,
        )?;
    }
    Ok(())
}

/// g(r + s·y) by coefficient-level Horner.
pub fn shift_linear(g: &IntPoly, r: &BigInt, s: &BigInt) -> IntPoly {
    let mut res: Vec<BigInt> = vec![];
    for c in g.coeffs().iter().rev() {
        // res = res·(r + s·y) + c
        let mut next = vec![BigInt::zero(); res.len() + 1];
        for (i, a) in res.iter().enumerate() {
            next[i] += a * r;
            next[i + 1] += a * s;
        }
        if next.is_empty() {
            next.push(BigInt::zero());
        }
        next[0] += c;
        res = next;
    }
    IntPoly::new(res)
}

/// Lift a simple root mod p (h'(y₀) a unit) to a residue mod p^target.
fn newton_lift(h: &IntPoly, y0: &BigUint, p: &BigUint, target: u32) -> BigUint {
    let mut y = BigInt::from(y0.clone());
    let pb = BigInt::from(p.clone());
    let mut modulus = pb.clone();
    for _ in 1..target {
        modulus = &modulus * &pb;
        let fy = h.eval(&y).mod_floor(&modulus);
        let dfy = h.derivative().eval(&y).mod_floor(&pb);
        let inv = mod_inverse(
            &dfy.to_biguint().expect("unit derivative"),
            &p.clone(),
        )
        .expect("unit derivative");
        let delta = (&fy * BigInt::from(inv)).mod_floor(&modulus);
        y = (&y - delta).mod_floor(&modulus);
    }
    y.to_biguint().unwrap()
}

pub fn pow_biguint(p: &BigUint, k: u32) -> BigUint {
    let mut acc = BigUint::one();
    for _ in 0..k {
        acc *= p;
    }
    acc
}

pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let e = a.extended_gcd(&m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(&m).to_biguint().unwrap())
}

/// Re-certify a reported class by walking `extra` more digit levels through
/// the same shift/scale chain and requiring a unique continuation at each.
pub fn refine_class_unique(
    f: &IntPoly,
    class: &PadicRootClass,
    p: &BigUint,
    extra: u32,
) -> bool {
    // normalize to the unit-root polynomial for this valuation
    let g = if class.valuation >= 0 {
        scale_by_prime_power(f, p, class.valuation as u32)
    } else {
        scale_by_prime_power(&f.reversed(), p, (-class.valuation) as u32)
    };
    let residue = if class.valuation >= 0 {
        class.residue.clone()
    } else {
        let pk = pow_biguint(p, class.modulus_exp);
        match mod_inverse(&class.residue, &pk) {
            Some(r) => r,
            None => return false,
        }
    };
    let p_u64 = match u64::try_from(p) {
        Ok(v) if v <= 10_000 => v,
        _ => return false,
    };
    let pb = BigInt::from(p.clone());
    // descend the branching chain along the digits of `residue`
    let mut h = g;
    let mut digits = residue.clone();
    for _ in 0..class.hensel_level.saturating_sub(1) {
        let (rest, digit) = digits.div_rem(&BigUint::from(p_u64));
        h = remove_p_content(&shift_linear(&h, &BigInt::from(digit), &pb), p);
        digits = rest;
    }
    let (mut rest, digit) = digits.div_rem(&BigUint::from(p_u64));
    let mut y = BigInt::from(digit);
    // simple-root condition at the certification point
    if h.derivative().eval(&y).mod_floor(&pb).is_zero() {
        return false;
    }
    if !h.eval(&y).mod_floor(&pb).is_zero() {
        return false;
    }
    let mut modulus = pb.clone();
    for _ in 0..(class.modulus_exp - class.hensel_level) + extra {
        modulus = &modulus * &pb;
        let mut continuations = Vec::new();
        let step = &modulus / &pb;
        for t in 0..p_u64 {
            let cand = &y + BigInt::from(t) * &step;
            if h.eval(&cand).mod_floor(&modulus).is_zero() {
                continuations.push(cand);
            }
        }
        if continuations.len() != 1 {
            return false;
        }
        y = continuations.pop().unwrap();
        // reported digits must stay consistent while they last
        let (r2, d2) = rest.div_rem(&BigUint::from(p_u64));
        if !rest.is_zero() {
            let want = BigInt::from(d2);
            let got = (&y / &step).mod_floor(&pb);
            if want != got {
                return false;
            }
        }
        rest = r2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64(cs)
    }

    fn p2() -> BigUint {
        BigUint::from(2u32)
    }

    #[test]
    fn newton_polygon_integer_slopes() {
        // x^2 - 2: points (0,1),(2,0): slope -1/2, no integer valuation
        assert!(integer_valuations(&poly(&[-2, 0, 1]), &p2()).is_empty());
        // 3x^10 + x^2 - 4: (0,2),(2,0),(10,0): valuations 1 and 0
        let v = integer_valuations(&poly(&[-4, 0, 1, 0, 0, 0, 0, 0, 0, 0, 3]), &p2());
        assert_eq!(v, vec![1, 0]);
    }

    #[test]
    fn x2_minus_17_has_two_2adic_roots() {
        let c = count_qp_distinct(&poly(&[-17, 0, 1]), &p2()).unwrap();
        assert_eq!(c.distinct, 2);
        // 17 ≡ 1 mod 8: square roots are ±1 mod 8: residues 1 and 7 mod 8
        let mut residues: Vec<u64> = c
            .classes
            .iter()
            .map(|cl| {
                let m = pow_biguint(&p2(), 3);
                u64::try_from(&cl.residue.mod_floor(&m)).unwrap()
            })
            .collect();
        residues.sort();
        assert_eq!(residues, vec![1, 7]);
    }

    #[test]
    fn x2_minus_2_has_no_2adic_roots() {
        let c = count_qp_distinct(&poly(&[-2, 0, 1]), &p2()).unwrap();
        assert_eq!(c.distinct, 0);
    }

    #[test]
    fn extremal_trinomial_attains_six() {
        // 3x^10 + x^2 − 4: the m=3 extremal example over ℚ_2
        let f = poly(&[-4, 0, 1, 0, 0, 0, 0, 0, 0, 0, 3]);
        let c = count_qp_distinct(&f, &p2()).unwrap();
        assert_eq!(c.distinct, 6);
    }

    #[test]
    fn negative_valuation_roots_via_reversal() {
        // 2x - 1: root 1/2 with v_2 = -1
        let c = count_qp_distinct(&poly(&[-1, 2]), &p2()).unwrap();
        assert_eq!(c.distinct, 1);
        assert_eq!(c.classes[0].valuation, -1);
        // 4x^2 - 1: roots ±1/2
        let c = count_qp_distinct(&poly(&[-1, 0, 4]), &p2()).unwrap();
        assert_eq!(c.distinct, 2);
    }

    #[test]
    fn unit_circle_example_q5() {
        // x^2 + 1 has the two 4th roots of unity in Q_5
        let c = count_qp_distinct(&poly(&[1, 0, 1]), &BigUint::from(5u32)).unwrap();
        assert_eq!(c.distinct, 2);
        // and none in Q_2 or Q_3
        assert_eq!(count_qp_distinct(&poly(&[1, 0, 1]), &p2()).unwrap().distinct, 0);
        assert_eq!(
            count_qp_distinct(&poly(&[1, 0, 1]), &BigUint::from(3u32))
                .unwrap()
                .distinct,
            0
        );
    }

    #[test]
    fn witnesses_satisfy_the_equation_to_their_modulus() {
        let f = poly(&[-4, 0, 1, 0, 0, 0, 0, 0, 0, 0, 3]);
        let c = count_qp_distinct(&f, &p2()).unwrap();
        for cl in &c.classes {
            assert!(cl.valuation >= 0, "trinomial roots are integral");
            let m = BigInt::from(pow_biguint(&p2(), cl.modulus_exp));
            let x = BigInt::from(cl.residue.clone()) * BigInt::from(2).pow(cl.valuation as u32);
            let v = f.eval(&x).mod_floor(&m);
            // x approximates the root to modulus_exp digits of its unit part;
            // the residual must vanish to at least hensel_level digits
            let lvl = BigInt::from(pow_biguint(&p2(), cl.hensel_level));
            assert!(v.mod_floor(&lvl).is_zero());
        }
    }

    #[test]
    fn refinement_keeps_exactly_one_root() {
        for cs in [
            vec![-17i64, 0, 1],
            vec![-4, 0, 1, 0, 0, 0, 0, 0, 0, 0, 3],
            vec![-1, 0, 4],
        ] {
            let f = IntPoly::from_i64(&cs);
            let c = count_qp_distinct(&f, &p2()).unwrap();
            for cl in &c.classes {
                assert!(
                    refine_class_unique(&f, cl, &p2(), 2),
                    "class {cl:?} of {cs:?} failed refinement"
                );
            }
        }
    }

    #[test]
    fn large_prime_budget_refusal() {
        let big = BigUint::from(1_000_003u64 * 2 + 1); // odd > 2^20
        assert!(matches!(
            count_qp_distinct(&poly(&[-1, 1]), &big),
            Err(OracleError::BudgetExceeded(_))
        ));
    }
}
