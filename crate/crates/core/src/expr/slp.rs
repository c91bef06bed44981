//! Straight-line programs and the τ̂ upper bound.
//!
//! A straight-line program starts from the fixed prefix `(1, x₁)` and extends
//! it by binary sums, differences, and products of earlier entries. τ̂ is the
//! length of the program our compiler emits — an upper bound for the true
//! minimum τ. Integer constants are built by binary double-and-add from the
//! initial 1; powers by square-and-multiply.

use super::{Expression, Node, NodeId};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Instr {
    /// The constant 1 (entry 0).
    One,
    /// Variable (entry 1 for univariate programs).
    Var(u32),
    Sum(usize, usize),
    Diff(usize, usize),
    Prod(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlpError {
    /// τ is defined for integer polynomials only.
    NonIntegerConstant,
    /// τ̂ is reported only for univariate expressions.
    Multivariate,
}

impl fmt::Display for SlpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlpError::NonIntegerConstant => write!(f, "non-integer constant in τ̂ computation"),
            SlpError::Multivariate => write!(f, "τ̂ is defined for univariate expressions only"),
        }
    }
}

impl std::error::Error for SlpError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slp {
    instrs: Vec<Instr>,
    result: usize,
}

impl Slp {
    pub fn instrs(&self) -> &[Instr] {
        &self.instrs
    }

    pub fn result(&self) -> usize {
        self.result
    }

    /// τ̂ = N−1 for the sequence (1, x₁, f₂, …, f_N) ending at the result.
    pub fn tau(&self) -> usize {
        self.result.saturating_sub(1)
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, x: &num_rational::BigRational) -> num_rational::BigRational {
        let mut vals: Vec<num_rational::BigRational> = Vec::with_capacity(self.instrs.len());
        for ins in &self.instrs {
            let v = match ins {
                Instr::One => num_rational::BigRational::one(),
                Instr::Var(_) => x.clone(),
                Instr::Sum(i, j) => &vals[*i] + &vals[*j],
                Instr::Diff(i, j) => &vals[*i] - &vals[*j],
                Instr::Prod(i, j) => &vals[*i] * &vals[*j],
            };
            vals.push(v);
        }
        vals[self.result].clone()
    }
}

struct Compiler<'e> {
    e: &'e Expression,
    instrs: Vec<Instr>,
    node_memo: HashMap<NodeId, usize>,
    const_memo: HashMap<BigInt, usize>,
}

impl<'e> Compiler<'e> {
    fn push(&mut self, ins: Instr) -> usize {
        self.instrs.push(ins);
        self.instrs.len() - 1
    }

    /// Build an integer constant from the initial 1 by double-and-add;
    /// negatives as 1 − (|n|+1). Every intermediate value is cached.
    fn build_int(&mut self, n: &BigInt) -> usize {
        if let Some(&ix) = self.const_memo.get(n) {
            return ix;
        }
        let ix = if n.is_zero() {
            self.push(Instr::Diff(0, 0))
        } else if n.is_one() {
            0
        } else if n.is_negative() {
            let pos = self.build_int(&(-n + BigInt::one()));
            self.push(Instr::Diff(0, pos))
        } else {
            let bits = n.bits();
            let mut acc = 0usize; // entry 0 = 1, the leading bit
            let mut val = BigInt::one();
            for k in (0..bits - 1).rev() {
                val = &val + &val;
                acc = match self.const_memo.get(&val) {
                    Some(&ix) => ix,
                    None => {
                        let ix = self.push(Instr::Sum(acc, acc));
                        self.const_memo.insert(val.clone(), ix);
                        ix
                    }
                };
                if n.bit(k) {
                    val += BigInt::one();
                    acc = match self.const_memo.get(&val) {
                        Some(&ix) => ix,
                        None => {
                            let ix = self.push(Instr::Sum(acc, 0));
                            self.const_memo.insert(val.clone(), ix);
                            ix
                        }
                    };
                }
            }
            acc
        };
        self.const_memo.insert(n.clone(), ix);
        ix
    }

    /// True when the node is `(−1)·m`; gives `m` for Diff emission.
    fn negated_operand(&self, id: NodeId) -> Option<NodeId> {
        if let Node::Mul(a, b) = self.e.node(id) {
            if let Node::Const(c) = self.e.node(*a) {
                if *c == -num_rational::BigRational::one() {
                    return Some(*b);
                }
            }
            if let Node::Const(c) = self.e.node(*b) {
                if *c == -num_rational::BigRational::one() {
                    return Some(*a);
                }
            }
        }
        None
    }

    fn compile(&mut self, id: NodeId) -> Result<usize, SlpError> {
        if let Some(&ix) = self.node_memo.get(&id) {
            return Ok(ix);
        }
        let ix = match self.e.node(id).clone() {
            Node::Const(q) => {
                if !q.is_integer() {
                    return Err(SlpError::NonIntegerConstant);
                }
                self.build_int(q.numer())
            }
            Node::Var(_) => 1,
            Node::Add(l, r) => {
                if let Some(m) = self.negated_operand(r) {
                    let a = self.compile(l)?;
                    let b = self.compile(m)?;
                    self.push(Instr::Diff(a, b))
                } else if let Some(m) = self.negated_operand(l) {
                    let a = self.compile(r)?;
                    let b = self.compile(m)?;
                    self.push(Instr::Diff(a, b))
                } else if let (Node::Const(c), true) = (self.e.node(r), true) {
                    if c.is_integer() && c.is_negative() {
                        let a = self.compile(l)?;
                        let b = self.build_int(&-c.numer().clone());
                        self.push(Instr::Diff(a, b))
                    } else {
                        let a = self.compile(l)?;
                        let b = self.compile(r)?;
                        self.push(Instr::Sum(a, b))
                    }
                } else {
                    let a = self.compile(l)?;
                    let b = self.compile(r)?;
                    self.push(Instr::Sum(a, b))
                }
            }
            Node::Mul(l, r) => {
                let a = self.compile(l)?;
                let b = self.compile(r)?;
                self.push(Instr::Prod(a, b))
            }
            Node::Pow(base, exp) => {
                if exp.is_zero() {
                    0
                } else {
                    let b = self.compile(base)?;
                    // square-and-multiply over the exponent bits, msb first
                    let bits = exp.bits();
                    let mut acc = b;
                    for k in (0..bits - 1).rev() {
                        acc = self.push(Instr::Prod(acc, acc));
                        if bit(&exp, k) {
                            acc = self.push(Instr::Prod(acc, b));
                        }
                    }
                    acc
                }
            }
        };
        self.node_memo.insert(id, ix);
        Ok(ix)
    }
}

fn bit(n: &BigUint, k: u64) -> bool {
    (n >> k) & BigUint::one() == BigUint::one()
}

/// Compile a univariate integer-constant expression to an SLP whose
/// evaluation agrees with the expression at every rational point.
pub fn to_slp(e: &Expression) -> Result<Slp, SlpError> {
    if e.n_vars() > 1 {
        return Err(SlpError::Multivariate);
    }
    if e.roots().len() != 1 {
        return Err(SlpError::Multivariate);
    }
    let mut c = Compiler {
        e,
        instrs: vec![Instr::One, Instr::Var(1)],
        node_memo: HashMap::new(),
        const_memo: HashMap::from([(BigInt::one(), 0usize)]),
    };
    let result = c.compile(e.roots()[0])?;
    Ok(Slp {
        instrs: c.instrs,
        result,
    })
}
