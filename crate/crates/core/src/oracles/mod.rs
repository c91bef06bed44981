//! Exact root counting over ℝ, ℚ, ℤ, and ℚ_p.
//!
//! Every counter runs on the squarefree decomposition of the input, so the
//! distinct count and the multiplicity count come from the same pass: a root
//! of the multiplicity-i factor contributes 1 to `distinct` and i to
//! `with_multiplicity`. The root 0 is stripped first and never double counted.

pub mod padic;
pub mod unipoly;

use crate::expand::SparsePoly;
use crate::numeric::primes;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt;
use unipoly::IntPoly;

pub use padic::PadicRootClass;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FieldDescriptor {
    R,
    Q,
    Z,
    Qp(BigUint),
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::R => write!(f, "R"),
            FieldDescriptor::Q => write!(f, "Q"),
            FieldDescriptor::Z => write!(f, "Z"),
            FieldDescriptor::Qp(p) => write!(f, "Q{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    /// Exact rational root (rendered "n" or "n/d") with its multiplicity.
    Rational { root: String, multiplicity: u32 },
    /// Truncated residue data for a p-adic root class.
    Padic {
        class: PadicRootClass,
        multiplicity: u32,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct RootCountResult {
    pub field: FieldDescriptor,
    pub distinct: u64,
    pub with_multiplicity: u64,
    /// Multiplicity of the root 0 (0 when 0 is not a root).
    pub zero_multiplicity: u32,
    /// None when roots are not representable (ℝ).
    pub witnesses: Option<Vec<Witness>>,
}

impl RootCountResult {
    /// Distinct roots excluding 0 (the L* convention of the m-nomial bounds).
    pub fn distinct_nonzero(&self) -> u64 {
        self.distinct - u64::from(self.zero_multiplicity > 0)
    }

    /// Multiplicity count excluding the root 0.
    pub fn with_multiplicity_nonzero(&self) -> u64 {
        self.with_multiplicity - u64::from(self.zero_multiplicity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    ZeroPolynomial,
    NotUnivariate,
    NotPrime(BigUint),
    /// Coefficients or prime too large for the enumeration budgets.
    BudgetExceeded(String),
    /// Branching depth exceeded its certificate (non-squarefree input only).
    DepthExceeded,
    /// Degree too large for dense oracle work.
    DegreeBudget(usize),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::ZeroPolynomial => write!(f, "the zero polynomial has every point as root"),
            OracleError::NotUnivariate => write!(f, "root counting is univariate only"),
            OracleError::NotPrime(p) => write!(f, "{p} is not prime"),
            OracleError::BudgetExceeded(s) => write!(f, "budget exceeded: {s}"),
            OracleError::DepthExceeded => write!(f, "branching depth exceeded its certificate"),
            OracleError::DegreeBudget(d) => write!(f, "degree {d} beyond the dense oracle budget"),
        }
    }
}

impl std::error::Error for OracleError {}

const MAX_DENSE_DEGREE: usize = 1 << 16;
const RHO_BUDGET: u64 = 1 << 19;
const MAX_DIVISORS: usize = 1 << 14;

/// Convert a univariate SparsePoly to a primitive integer polynomial.
fn to_int_poly(p: &SparsePoly) -> Result<IntPoly, OracleError> {
    if p.n_vars() != 1 {
        return Err(OracleError::NotUnivariate);
    }
    if p.is_zero() {
        return Err(OracleError::ZeroPolynomial);
    }
    let deg = p.total_degree().expect("nonzero");
    let deg = usize::try_from(&deg).map_err(|_| OracleError::DegreeBudget(usize::MAX))?;
    if deg > MAX_DENSE_DEGREE {
        return Err(OracleError::DegreeBudget(deg));
    }
    let mut coeffs = vec![BigRational::zero(); deg + 1];
    for (exps, c) in p.terms() {
        let i = usize::try_from(&exps[0]).expect("bounded by degree");
        coeffs[i] = c.clone();
    }
    Ok(IntPoly::primitive_from_rationals(&coeffs))
}

/// The squarefree part p / gcd(p, p′): same roots, multiplicity one.
pub fn squarefree_part(p: &SparsePoly) -> Result<SparsePoly, OracleError> {
    let f = to_int_poly(p)?;
    let s = f.squarefree_part();
    Ok(SparsePoly::from_univariate(
        &s.coeffs()
            .iter()
            .map(|c| BigRational::from(c.clone()))
            .collect::<Vec<_>>(),
    ))
}

/// Squarefree factors (a_i, multiplicity i) with the power of x split off.
struct Prepared {
    zero_multiplicity: u32,
    factors: Vec<(IntPoly, u32)>,
}

fn prepare(p: &SparsePoly) -> Result<Prepared, OracleError> {
    let f = to_int_poly(p)?;
    let factors = f.yun_squarefree();
    let mut zero_multiplicity = 0u32;
    let mut out = Vec::new();
    for (mut a, mult) in factors {
        let k = a.strip_zero_root();
        debug_assert!(k <= 1, "squarefree factor has simple roots");
        if k == 1 {
            zero_multiplicity = mult;
        }
        if a.degree().is_some_and(|d| d >= 1) {
            out.push((a, mult));
        }
    }
    Ok(Prepared {
        zero_multiplicity,
        factors: out,
    })
}

/// Exact count of distinct real roots via Sturm chains on (−∞, ∞).
pub fn count_real_roots(p: &SparsePoly) -> Result<RootCountResult, OracleError> {
    let prep = prepare(p)?;
    let mut distinct = u64::from(prep.zero_multiplicity > 0);
    let mut with_mult = u64::from(prep.zero_multiplicity);
    for (a, mult) in &prep.factors {
        let n = a.sturm_count_all() as u64;
        distinct += n;
        with_mult += n * u64::from(*mult);
    }
    Ok(RootCountResult {
        field: FieldDescriptor::R,
        distinct,
        with_multiplicity: with_mult,
        zero_multiplicity: prep.zero_multiplicity,
        witnesses: None,
    })
}

/// Rational roots of a squarefree primitive polynomial with nonzero constant
/// term, by divisor enumeration of the trailing and leading coefficients.
fn rational_roots_of_factor(a: &IntPoly) -> Result<Vec<BigRational>, OracleError> {
    let trailing = a.constant_term().magnitude().clone();
    let leading = a.leading().expect("nonzero").magnitude().clone();
    let budget = |e: primes::FactorBudgetExceeded| {
        OracleError::BudgetExceeded(format!("divisor enumeration stalled at {}", e.remaining))
    };
    let num_divs = primes::divisors(&trailing, RHO_BUDGET, MAX_DIVISORS).map_err(budget)?;
    let den_divs = primes::divisors(&leading, RHO_BUDGET, MAX_DIVISORS).map_err(budget)?;
    if num_divs.len() * den_divs.len() > MAX_DIVISORS * 4 {
        return Err(OracleError::BudgetExceeded(format!(
            "{} candidate rationals",
            num_divs.len() * den_divs.len()
        )));
    }
    let mut roots = Vec::new();
    for n in &num_divs {
        for d in &den_divs {
            if n.gcd(d) != BigUint::one() {
                continue;
            }
            let q = BigRational::new(BigInt::from(n.clone()), BigInt::from(d.clone()));
            for cand in [q.clone(), -q] {
                if a.eval_rat(&cand).is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    Ok(roots)
}

/// Exact count (with witnesses) of rational roots.
pub fn count_rational_roots(p: &SparsePoly) -> Result<RootCountResult, OracleError> {
    let prep = prepare(p)?;
    let mut witnesses = Vec::new();
    if prep.zero_multiplicity > 0 {
        witnesses.push(Witness::Rational {
            root: "0".to_string(),
            multiplicity: prep.zero_multiplicity,
        });
    }
    for (a, mult) in &prep.factors {
        for r in rational_roots_of_factor(a)? {
            witnesses.push(Witness::Rational {
                root: crate::expand::rational_string(&r),
                multiplicity: *mult,
            });
        }
    }
    Ok(summarize(FieldDescriptor::Q, witnesses, prep.zero_multiplicity))
}

/// Exact count of integer roots: candidates are ± divisors of the trailing
/// coefficient of each primitive factor.
pub fn count_integer_roots(p: &SparsePoly) -> Result<RootCountResult, OracleError> {
    let prep = prepare(p)?;
    let mut witnesses = Vec::new();
    if prep.zero_multiplicity > 0 {
        witnesses.push(Witness::Rational {
            root: "0".to_string(),
            multiplicity: prep.zero_multiplicity,
        });
    }
    for (a, mult) in &prep.factors {
        let trailing = a.constant_term().magnitude().clone();
        let divs = primes::divisors(&trailing, RHO_BUDGET, MAX_DIVISORS).map_err(|e| {
            OracleError::BudgetExceeded(format!("divisor enumeration stalled at {}", e.remaining))
        })?;
        for d in &divs {
            let d = BigInt::from(d.clone());
            for cand in [d.clone(), -d] {
                if a.eval(&cand).is_zero() {
                    witnesses.push(Witness::Rational {
                        root: cand.to_string(),
                        multiplicity: *mult,
                    });
                }
            }
        }
    }
    Ok(summarize(FieldDescriptor::Z, witnesses, prep.zero_multiplicity))
}

/// Exact count of distinct roots in ℚ_p, with residue-class witnesses.
pub fn count_padic_roots(p: &SparsePoly, prime: &BigUint) -> Result<RootCountResult, OracleError> {
    if !primes::is_prime(prime) {
        return Err(OracleError::NotPrime(prime.clone()));
    }
    let prep = prepare(p)?;
    let mut witnesses = Vec::new();
    if prep.zero_multiplicity > 0 {
        witnesses.push(Witness::Rational {
            root: "0".to_string(),
            multiplicity: prep.zero_multiplicity,
        });
    }
    for (a, mult) in &prep.factors {
        let count = padic::count_qp_distinct(a, prime)?;
        for class in count.classes {
            witnesses.push(Witness::Padic {
                class,
                multiplicity: *mult,
            });
        }
    }
    Ok(summarize(
        FieldDescriptor::Qp(prime.clone()),
        witnesses,
        prep.zero_multiplicity,
    ))
}

fn summarize(
    field: FieldDescriptor,
    witnesses: Vec<Witness>,
    zero_multiplicity: u32,
) -> RootCountResult {
    let distinct = witnesses.len() as u64;
    let with_multiplicity = witnesses
        .iter()
        .map(|w| match w {
            Witness::Rational { multiplicity, .. } => u64::from(*multiplicity),
            Witness::Padic { multiplicity, .. } => u64::from(*multiplicity),
        })
        .sum();
    RootCountResult {
        field,
        distinct,
        with_multiplicity,
        zero_multiplicity,
        witnesses: Some(witnesses),
    }
}
