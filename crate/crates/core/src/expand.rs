//! Budgeted expansion into sparse monomial form.
//!
//! Expansion bridges σ-presentations and the monomial world: the term count
//! `m` feeds the m-nomial bounds, and the oracles consume coefficients.
//! Expanded forms can be doubly exponentially larger than the expression, so
//! every operation here is budgeted and fails soft with [`ExpandError`].

use crate::expr::{rat_pow, Expression, Node};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Map from exponent vectors to nonzero rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    n_vars: u32,
    terms: BTreeMap<Vec<BigUint>, BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExpandError {
    /// more monomials than the term budget
    TermBudget { limit: usize },
    /// degree beyond the degree budget
    DegreeBudget { limit: BigUint },
    /// a constant raised to an exponent too large to materialize
    CoefficientBudget,
}

impl fmt::Display for ExpandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpandError::TermBudget { limit } => {
                write!(f, "expansion exceeds the term budget ({limit})")
            }
            ExpandError::DegreeBudget { limit } => {
                write!(f, "expansion exceeds the degree budget ({limit})")
            }
            ExpandError::CoefficientBudget => {
                write!(f, "constant power too large to materialize")
            }
        }
    }
}

impl std::error::Error for ExpandError {}

/// Term and degree caps for expansion.
#[derive(Debug, Clone)]
pub struct ExpandBudget {
    pub max_terms: usize,
    pub max_degree: BigUint,
}

impl Default for ExpandBudget {
    fn default() -> Self {
        ExpandBudget {
            max_terms: 1_000_000,
            max_degree: BigUint::from(1_000_000_000u64),
        }
    }
}

impl ExpandBudget {
    pub fn with_max_terms(mut self, n: usize) -> Self {
        self.max_terms = n;
        self
    }
}

impl SparsePoly {
    pub fn zero(n_vars: u32) -> Self {
        SparsePoly {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(q: BigRational, n_vars: u32) -> Self {
        let mut p = Self::zero(n_vars);
        if !q.is_zero() {
            p.terms.insert(vec![BigUint::zero(); n_vars as usize], q);
        }
        p
    }

    pub fn variable(index: u32, n_vars: u32) -> Self {
        assert!(index >= 1 && index <= n_vars);
        let mut exps = vec![BigUint::zero(); n_vars as usize];
        exps[(index - 1) as usize] = BigUint::one();
        let mut p = Self::zero(n_vars);
        p.terms.insert(exps, BigRational::one());
        p
    }

    /// Build a univariate polynomial from dense coefficients (index = degree).
    pub fn from_univariate(coeffs: &[BigRational]) -> Self {
        let mut p = Self::zero(1);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                p.terms.insert(vec![BigUint::from(i)], c.clone());
            }
        }
        p
    }

    pub fn n_vars(&self) -> u32 {
        self.n_vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<BigUint>, BigRational> {
        &self.terms
    }

    /// m: the number of monomial terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; None for the zero polynomial.
    pub fn total_degree(&self) -> Option<BigUint> {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<BigUint>())
            .max()
    }

    pub fn eval(&self, point: &[BigRational]) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for (exps, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (x, e) in point.iter().zip(exps) {
                term *= rat_pow(x, e)?;
            }
            acc += term;
        }
        Some(acc)
    }

    fn insert_term(&mut self, exps: Vec<BigUint>, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_budgeted(
        &mut self,
        other: &SparsePoly,
        budget: &ExpandBudget,
    ) -> Result<(), ExpandError> {
        for (e, c) in &other.terms {
            self.insert_term(e.clone(), c.clone());
            if self.terms.len() > budget.max_terms {
                return Err(ExpandError::TermBudget {
                    limit: budget.max_terms,
                });
            }
        }
        Ok(())
    }

    pub fn mul_budgeted(
        &self,
        other: &SparsePoly,
        budget: &ExpandBudget,
    ) -> Result<SparsePoly, ExpandError> {
        let mut out = SparsePoly::zero(self.n_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<BigUint> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_term(exps, ca * cb);
                if out.terms.len() > budget.max_terms {
                    return Err(ExpandError::TermBudget {
                        limit: budget.max_terms,
                    });
                }
            }
        }
        Ok(out)
    }

    fn pow_budgeted(&self, e: &BigUint, budget: &ExpandBudget) -> Result<SparsePoly, ExpandError> {
        if e.is_zero() {
            return Ok(SparsePoly::constant(BigRational::one(), self.n_vars));
        }
        let e = u64::try_from(e).map_err(|_| ExpandError::CoefficientBudget)?;
        match self.terms.len() {
            0 => return Ok(SparsePoly::zero(self.n_vars)),
            1 => {
                // monomial: scale the exponent vector, power the coefficient
                let (exps, coeff) = self.terms.iter().next().unwrap();
                let exps: Vec<BigUint> = exps.iter().map(|x| x * e).collect();
                let coeff = rat_pow(coeff, &BigUint::from(e))
                    .ok_or(ExpandError::CoefficientBudget)?;
                let mut p = SparsePoly::zero(self.n_vars);
                p.insert_term(exps, coeff);
                return Ok(p);
            }
            2 => return self.pow_binomial(e, budget),
            _ => {}
        }
        let mut acc = SparsePoly::constant(BigRational::one(), self.n_vars);
        let mut base = self.clone();
        let mut e = e;
        loop {
            if e & 1 == 1 {
                acc = acc.mul_budgeted(&base, budget)?;
            }
            e >>= 1;
            if e == 0 {
                return Ok(acc);
            }
            base = base.mul_budgeted(&base, budget)?;
        }
    }

    /// (c₁·X^a + c₂·X^b)^n by the binomial theorem with one running term:
    /// term_{k+1} = term_k · c₁(n−k) / (c₂(k+1)). Two-term gates are the
    /// common case, and repeated squaring is hopeless at exponents like 999.
    fn pow_binomial(&self, n: u64, budget: &ExpandBudget) -> Result<SparsePoly, ExpandError> {
        debug_assert_eq!(self.terms.len(), 2);
        if n as usize + 1 > budget.max_terms {
            return Err(ExpandError::TermBudget {
                limit: budget.max_terms,
            });
        }
        let mut it = self.terms.iter();
        let (ea, ca) = it.next().unwrap();
        let (eb, cb) = it.next().unwrap();
        let mut out = SparsePoly::zero(self.n_vars);
        let mut term = rat_pow(ca, &BigUint::from(n)).ok_or(ExpandError::CoefficientBudget)?;
        for k in 0..=n {
            // exponent vector: (n−k)·ea + k·eb
            let exps: Vec<BigUint> = ea
                .iter()
                .zip(eb)
                .map(|(a, b)| a * (n - k) + b * k)
                .collect();
            out.insert_term(exps, term.clone());
            if out.terms.len() > budget.max_terms {
                return Err(ExpandError::TermBudget {
                    limit: budget.max_terms,
                });
            }
            if k < n {
                term = term * cb * BigRational::from(BigInt::from(n - k))
                    / (ca * BigRational::from(BigInt::from(k + 1)));
            }
        }
        Ok(out)
    }

    /// JSON form with exact (string) integers: exps and coeff "n" or "n/d".
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(e, c)| {
                serde_json::json!({
                    "exps": e.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "coeff": rational_string(c),
                })
            })
            .collect();
        serde_json::json!({ "n_vars": self.n_vars, "terms": terms })
    }
}

pub fn rational_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, coeff) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut parts = Vec::new();
            let trivial = exps.iter().all(|e| e.is_zero());
            if !coeff.is_one() || trivial {
                parts.push(rational_string(coeff));
            }
            for (i, e) in exps.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                if e.is_one() {
                    parts.push(format!("x{}", i + 1));
                } else {
                    parts.push(format!("x{}^{}", i + 1, e));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Expand an expression into sparse monomial form within the budget.
/// Returns one polynomial per root.
pub fn expand(e: &Expression, budget: &ExpandBudget) -> Result<Vec<SparsePoly>, ExpandError> {
    // degree pre-check from the structural bound, before any materialization
    for d in e.degree_bound() {
        if d > budget.max_degree {
            return Err(ExpandError::DegreeBudget {
                limit: budget.max_degree.clone(),
            });
        }
    }
    let n = e.n_vars();
    let mut memo: Vec<Option<SparsePoly>> = vec![None; e.nodes().len()];
    for id in e.reachable() {
        let p = match e.node(id) {
            Node::Const(q) => SparsePoly::constant(q.clone(), n),
            Node::Var(i) => SparsePoly::variable(*i, n),
            Node::Add(l, r) => {
                let mut p = memo[*l].clone().unwrap();
                p.add_assign_budgeted(memo[*r].as_ref().unwrap(), budget)?;
                p
            }
            Node::Mul(l, r) => memo[*l]
                .as_ref()
                .unwrap()
                .mul_budgeted(memo[*r].as_ref().unwrap(), budget)?,
            Node::Pow(b, exp) => memo[*b].as_ref().unwrap().pow_budgeted(exp, budget)?,
        };
        memo[id] = Some(p);
    }
    Ok(e.roots()
        .iter()
        .map(|&r| memo[r].clone().unwrap())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn expand1(text: &str) -> SparsePoly {
        let e = Expression::parse(text).unwrap();
        expand(&e, &ExpandBudget::default()).unwrap().remove(0)
    }

    #[test]
    fn x_times_x2_minus_1() {
        let p = expand1("x*(x^2 - 1)");
        assert_eq!(p.term_count(), 2);
        assert_eq!(p.total_degree(), Some(BigUint::from(3u32)));
        assert_eq!(p.terms()[&vec![BigUint::from(3u32)]], rat(1, 1));
        assert_eq!(p.terms()[&vec![BigUint::from(1u32)]], rat(-1, 1));
    }

    #[test]
    fn binomial_square() {
        let p = expand1("(x+1)^2");
        assert_eq!(p.term_count(), 3);
        assert_eq!(p.terms()[&vec![BigUint::from(1u32)]], rat(2, 1));
    }

    #[test]
    fn remark_trinomial() {
        let p = expand1("3*x^10 + x^2 - 4");
        assert_eq!(p.term_count(), 3);
        assert_eq!(p.total_degree(), Some(BigUint::from(10u32)));
    }

    #[test]
    fn zero_and_monomial_term_counts() {
        assert_eq!(expand1("x - x").term_count(), 0);
        let p = expand1("7*x^5");
        assert_eq!(p.term_count(), 1);
        assert_eq!(p.total_degree(), Some(BigUint::from(5u32)));
    }

    #[test]
    fn shared_example_degree_1002() {
        // independent CAS expansion fixes degree 1002 and m = 1003
        let p = expand1("9*(x-7)^99*(2*x+1)^43 - 11*(x-7)^999*(2*x+1)^3");
        assert_eq!(p.total_degree(), Some(BigUint::from(1002u32)));
        assert_eq!(p.term_count(), 1003);
    }

    #[test]
    fn expansion_agrees_with_expression_eval() {
        let texts = [
            "x*(x^2-1)",
            "(x+1)^3 - (x-1)^3",
            "3*x^2*(x^3 + 2*x)^2*(5*(x^3 + 2*x)^4 + 7*x^3*(x^3 + 2*x)^2)^3",
            "1/2*x^2 - 7/3*x + 1",
        ];
        let mut seed = 12345u64;
        for t in texts {
            let e = Expression::parse(t).unwrap();
            let p = expand(&e, &ExpandBudget::default()).unwrap().remove(0);
            for _ in 0..20 {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
                let num = (seed >> 40) as i64 - (1 << 23);
                let den = ((seed >> 20) % 97 + 1) as i64;
                let x = rat(num, den);
                assert_eq!(p.eval(&[x.clone()]).unwrap(), e.eval(&[x]).unwrap()[0]);
            }
        }
    }

    #[test]
    fn degree_budget_fails_soft() {
        let e = Expression::parse("x^1000000001").unwrap();
        match expand(&e, &ExpandBudget::default()) {
            Err(ExpandError::DegreeBudget { .. }) => {}
            other => panic!("expected degree budget failure, got {other:?}"),
        }
    }

    #[test]
    fn term_budget_fails_soft() {
        let e = Expression::parse("(x+1)^64").unwrap();
        let tight = ExpandBudget::default().with_max_terms(10);
        assert!(matches!(
            expand(&e, &tight),
            Err(ExpandError::TermBudget { .. })
        ));
    }

    #[test]
    fn unbounded_m_with_constant_sigma() {
        // the λ-family: m grows with λ while σ̂ stays 2
        for lambda in 1u32..=10 {
            let t = format!("x^{lambda}*(x+1)^2*(3*(x+1)^3 + 5*x^{lambda}*(x+1))^2");
            let e = Expression::parse(&t).unwrap();
            assert_eq!(e.sigma_upper(), 2, "λ={lambda}");
            let p = expand(&e, &ExpandBudget::default()).unwrap().remove(0);
            assert!(p.term_count() >= lambda as usize);
        }
    }

    #[test]
    fn product_term_count_submultiplicative() {
        let a = expand1("(x+1)^4");
        let b = expand1("x^2 - 2");
        let ab = expand1("(x+1)^4*(x^2 - 2)");
        assert!(ab.term_count() <= a.term_count() * b.term_count());
    }
}
