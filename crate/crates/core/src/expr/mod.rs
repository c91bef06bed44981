//! Expression DSL: shared-subexpression graphs and the additive-complexity
//! measure σ̂.
//!
//! An [`Expression`] is an acyclic arena of nodes; structurally identical
//! subexpressions are interned to a single node id, so writing a repeated
//! subexpression twice costs nothing — additions in repeated subexpressions
//! are counted once. `σ̂` is the number of distinct `Add` nodes reachable
//! from the roots: the additive complexity of the *given* presentation,
//! an upper bound for the true minimum σ. Subtraction is `Add` with the
//! negated constant folded into one operand, so `a−b` costs one addition.

mod parse;
pub mod slp;

pub use parse::ParseError;
pub use slp::{Slp, SlpError};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Const(BigRational),
    /// 1-based variable index.
    Var(u32),
    Add(NodeId, NodeId),
    Mul(NodeId, NodeId),
    Pow(NodeId, BigUint),
}

/// Arena builder; one per parse session. Interning makes node identity
/// canonical within the session.
#[derive(Debug, Default)]
pub struct ExprBuilder {
    nodes: Vec<Node>,
    table: HashMap<Node, NodeId>,
}

impl ExprBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.table.get(&node) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(node.clone());
        self.table.insert(node, id);
        id
    }

    pub fn constant(&mut self, q: BigRational) -> NodeId {
        self.intern(Node::Const(q))
    }

    pub fn int(&mut self, n: i64) -> NodeId {
        self.constant(BigRational::from(BigInt::from(n)))
    }

    pub fn var(&mut self, index: u32) -> NodeId {
        assert!(index >= 1, "variable indices are 1-based");
        self.intern(Node::Var(index))
    }

    /// Commutative: operands stored sorted by id so `a+b` and `b+a` share.
    pub fn add(&mut self, l: NodeId, r: NodeId) -> NodeId {
        let (l, r) = if l <= r { (l, r) } else { (r, l) };
        self.intern(Node::Add(l, r))
    }

    pub fn mul(&mut self, l: NodeId, r: NodeId) -> NodeId {
        let (l, r) = if l <= r { (l, r) } else { (r, l) };
        self.intern(Node::Mul(l, r))
    }

    pub fn pow(&mut self, base: NodeId, exp: BigUint) -> NodeId {
        self.intern(Node::Pow(base, exp))
    }

    /// `a − b` as `a + (−1)·b`, with the sign folded into an existing
    /// constant multiplier when there is one.
    pub fn sub(&mut self, l: NodeId, r: NodeId) -> NodeId {
        let neg = self.negate(r);
        self.add(l, neg)
    }

    fn negate(&mut self, n: NodeId) -> NodeId {
        match self.nodes[n].clone() {
            Node::Const(q) => self.constant(-q),
            Node::Mul(a, b) => {
                if let Node::Const(c) = &self.nodes[a] {
                    let nc = self.constant(-c.clone());
                    self.mul(nc, b)
                } else if let Node::Const(c) = &self.nodes[b] {
                    let nc = self.constant(-c.clone());
                    self.mul(nc, a)
                } else {
                    let m1 = self.int(-1);
                    self.mul(m1, n)
                }
            }
            _ => {
                let m1 = self.int(-1);
                self.mul(m1, n)
            }
        }
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn finish(self, roots: Vec<NodeId>) -> Expression {
        assert!(!roots.is_empty());
        for &r in &roots {
            assert!(r < self.nodes.len());
        }
        Expression {
            nodes: self.nodes,
            roots,
        }
    }
}

/// Evaluation failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    /// Exponent too large to evaluate numerically.
    ExponentTooLarge,
    /// Point has fewer coordinates than the expression has variables.
    PointDimension { needed: u32, got: usize },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::ExponentTooLarge => write!(f, "exponent too large for evaluation"),
            EvalError::PointDimension { needed, got } => {
                write!(f, "point has {got} coordinates, expression needs {needed}")
            }
        }
    }
}

impl std::error::Error for EvalError {}

/// Complexity measures of a parsed expression.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ComplexityReport {
    pub sigma_hat: usize,
    /// None when τ̂ is undefined (non-integer constants or multivariate).
    pub tau_hat: Option<usize>,
    pub n_vars: u32,
    pub k_polys: usize,
}

/// An acyclic shared-subexpression graph with one or more output roots.
#[derive(Debug, Clone)]
pub struct Expression {
    nodes: Vec<Node>,
    roots: Vec<NodeId>,
}

/// Structural equality of the reachable graphs (arena layout and orphan
/// interned nodes are irrelevant; commutative operands match in either
/// order).
impl PartialEq for Expression {
    fn eq(&self, other: &Self) -> bool {
        if self.roots.len() != other.roots.len() {
            return false;
        }
        let mut memo: HashMap<(NodeId, NodeId), bool> = HashMap::new();
        self.roots
            .iter()
            .zip(&other.roots)
            .all(|(&a, &b)| eq_nodes(self, a, other, b, &mut memo))
    }
}

impl Eq for Expression {}

fn eq_nodes(
    ea: &Expression,
    a: NodeId,
    eb: &Expression,
    b: NodeId,
    memo: &mut HashMap<(NodeId, NodeId), bool>,
) -> bool {
    if let Some(&r) = memo.get(&(a, b)) {
        return r;
    }
    let r = match (&ea.nodes[a], &eb.nodes[b]) {
        (Node::Const(p), Node::Const(q)) => p == q,
        (Node::Var(i), Node::Var(j)) => i == j,
        (Node::Pow(b1, e1), Node::Pow(b2, e2)) => e1 == e2 && eq_nodes(ea, *b1, eb, *b2, memo),
        (Node::Add(l1, r1), Node::Add(l2, r2)) | (Node::Mul(l1, r1), Node::Mul(l2, r2)) => {
            (eq_nodes(ea, *l1, eb, *l2, memo) && eq_nodes(ea, *r1, eb, *r2, memo))
                || (eq_nodes(ea, *l1, eb, *r2, memo) && eq_nodes(ea, *r1, eb, *l2, memo))
        }
        _ => false,
    };
    memo.insert((a, b), r);
    r
}

impl Expression {
    /// Parse a single polynomial expression.
    pub fn parse(text: &str) -> Result<Expression, ParseError> {
        let mut b = ExprBuilder::new();
        let root = parse::parse_into(text, &mut b)?;
        Ok(b.finish(vec![root]))
    }

    /// Parse a `;`-separated system of expressions into one shared graph.
    pub fn parse_system(text: &str) -> Result<Expression, ParseError> {
        let mut b = ExprBuilder::new();
        let mut roots = Vec::new();
        let mut offset = 0;
        for part in text.split(';') {
            if part.trim().is_empty() {
                offset += part.len() + 1;
                continue;
            }
            let root = parse::parse_into(part, &mut b).map_err(|e| e.shift(offset))?;
            roots.push(root);
            offset += part.len() + 1;
        }
        if roots.is_empty() {
            return Err(ParseError::new(0, "empty input"));
        }
        Ok(b.finish(roots))
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    /// Node ids reachable from the roots, in ascending (topological) order.
    pub fn reachable(&self) -> Vec<NodeId> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack: Vec<NodeId> = self.roots.clone();
        while let Some(id) = stack.pop() {
            if seen[id] {
                continue;
            }
            seen[id] = true;
            match &self.nodes[id] {
                Node::Add(l, r) | Node::Mul(l, r) => {
                    stack.push(*l);
                    stack.push(*r);
                }
                Node::Pow(b, _) => stack.push(*b),
                _ => {}
            }
        }
        (0..self.nodes.len()).filter(|&i| seen[i]).collect()
    }

    /// Highest variable index reachable (0 for constant expressions is
    /// reported as 1: the ambient ring always has at least one variable).
    pub fn n_vars(&self) -> u32 {
        let mut n = 0;
        for id in self.reachable() {
            if let Node::Var(i) = self.nodes[id] {
                n = n.max(i);
            }
        }
        n.max(1)
    }

    /// σ̂: number of distinct Add nodes in the shared graph.
    pub fn sigma_upper(&self) -> usize {
        self.reachable()
            .into_iter()
            .filter(|&id| matches!(self.nodes[id], Node::Add(..)))
            .count()
    }

    /// τ̂ via SLP compilation; None when τ is undefined for this input.
    pub fn tau_upper(&self) -> Option<usize> {
        slp::to_slp(self).ok().map(|s| s.tau())
    }

    pub fn complexity(&self) -> ComplexityReport {
        ComplexityReport {
            sigma_hat: self.sigma_upper(),
            tau_hat: self.tau_upper(),
            n_vars: self.n_vars(),
            k_polys: self.roots.len(),
        }
    }

    /// Exact value of every root polynomial at a rational point.
    pub fn eval(&self, point: &[BigRational]) -> Result<Vec<BigRational>, EvalError> {
        let n = self.n_vars();
        if (point.len() as u32) < n {
            return Err(EvalError::PointDimension {
                needed: n,
                got: point.len(),
            });
        }
        let mut memo: Vec<Option<BigRational>> = vec![None; self.nodes.len()];
        for id in self.reachable() {
            let v = match &self.nodes[id] {
                Node::Const(q) => q.clone(),
                Node::Var(i) => point[(*i - 1) as usize].clone(),
                Node::Add(l, r) => {
                    memo[*l].as_ref().unwrap() + memo[*r].as_ref().unwrap()
                }
                Node::Mul(l, r) => {
                    memo[*l].as_ref().unwrap() * memo[*r].as_ref().unwrap()
                }
                Node::Pow(b, e) => {
                    let base = memo[*b].as_ref().unwrap();
                    rat_pow(base, e).ok_or(EvalError::ExponentTooLarge)?
                }
            };
            memo[id] = Some(v);
        }
        Ok(self
            .roots
            .iter()
            .map(|&r| memo[r].clone().unwrap())
            .collect())
    }

    /// Upper bound on the total degree of each root polynomial.
    pub fn degree_bound(&self) -> Vec<BigUint> {
        let mut memo: Vec<BigUint> = vec![BigUint::zero(); self.nodes.len()];
        for id in self.reachable() {
            memo[id] = match &self.nodes[id] {
                Node::Const(_) => BigUint::zero(),
                Node::Var(_) => BigUint::one(),
                Node::Add(l, r) => memo[*l].clone().max(memo[*r].clone()),
                Node::Mul(l, r) => &memo[*l] + &memo[*r],
                Node::Pow(b, e) => &memo[*b] * e,
            };
        }
        self.roots.iter().map(|&r| memo[r].clone()).collect()
    }

    /// Canonical text form; reparsing yields a structurally identical graph.
    pub fn render(&self) -> String {
        self.roots
            .iter()
            .map(|&r| self.render_node(r, 1))
            .collect::<Vec<_>>()
            .join("; ")
    }

    fn precedence(&self, id: NodeId) -> u8 {
        match &self.nodes[id] {
            Node::Add(..) => 1,
            Node::Mul(..) => 2,
            Node::Pow(..) => 3,
            Node::Const(q) => {
                if q.is_negative() || !q.is_integer() {
                    2 // needs care next to '^' and '*'
                } else {
                    4
                }
            }
            Node::Var(_) => 4,
        }
    }

    /// `min_prec` is the loosest precedence allowed without parentheses.
    fn render_node(&self, id: NodeId, min_prec: u8) -> String {
        let s = match &self.nodes[id] {
            Node::Const(q) => {
                if q.is_integer() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
            Node::Var(i) => format!("x{i}"),
            Node::Add(l, r) => {
                // subtraction sugar when the second operand carries a
                // negative constant; reparse folds the sign back identically
                if let Some(body) = self.negated_form(*r) {
                    format!("{} - {}", self.render_node(*l, 1), body)
                } else if let Some(body) = self.negated_form(*l) {
                    format!("{} - {}", self.render_node(*r, 1), body)
                } else {
                    format!(
                        "{} + {}",
                        self.render_node(*l, 1),
                        self.render_node(*r, 2)
                    )
                }
            }
            Node::Mul(l, r) => format!(
                "{}*{}",
                self.render_node(*l, 2),
                self.render_node(*r, 3)
            ),
            Node::Pow(b, e) => format!("{}^{}", self.render_node(*b, 4), e),
        };
        if self.precedence(id) < min_prec {
            format!("({s})")
        } else {
            s
        }
    }

    /// If node `n` is `Const(c<0)` or `Mul(Const(c<0), m)`, render its
    /// negation (used for `a - b` sugar).
    fn negated_form(&self, n: NodeId) -> Option<String> {
        match &self.nodes[n] {
            Node::Const(q) if q.is_negative() => {
                let p = -q.clone();
                if p.is_integer() {
                    Some(p.numer().to_string())
                } else {
                    Some(format!("{}/{}", p.numer(), p.denom()))
                }
            }
            Node::Mul(a, b) => {
                let (c, m) = match (&self.nodes[*a], &self.nodes[*b]) {
                    (Node::Const(c), _) if c.is_negative() => (c, *b),
                    (_, Node::Const(c)) if c.is_negative() => (c, *a),
                    _ => return None,
                };
                let p = -c.clone();
                let coeff = if p.is_integer() {
                    p.numer().to_string()
                } else {
                    format!("{}/{}", p.numer(), p.denom())
                };
                if p.is_one() {
                    Some(self.render_node(m, 2))
                } else {
                    Some(format!("{}*{}", coeff, self.render_node(m, 3)))
                }
            }
            _ => None,
        }
    }
}

/// x^e for a BigUint exponent; None when the exponent is too large to
/// evaluate (unless the base is 0, ±1).
pub fn rat_pow(base: &BigRational, exp: &BigUint) -> Option<BigRational> {
    if exp.is_zero() {
        return Some(BigRational::one());
    }
    if base.is_zero() {
        return Some(BigRational::zero());
    }
    if base.abs().is_one() {
        let neg = base.is_negative() && exp.is_odd();
        return Some(if neg {
            -BigRational::one()
        } else {
            BigRational::one()
        });
    }
    let e = u64::try_from(exp).ok()?;
    if e > 1 << 20 {
        return None;
    }
    let mut acc = BigRational::one();
    let mut b = base.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    Some(acc)
}


#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn single_var_parses_to_one_node() {
        let e = Expression::parse("x").unwrap();
        assert_eq!(e.reachable().len(), 1);
        assert!(matches!(e.node(e.roots()[0]), Node::Var(1)));
        assert_eq!(e.sigma_upper(), 0);
    }

    #[test]
    fn x_pow_zero_kept_and_evaluates_to_one() {
        let e = Expression::parse("x^0").unwrap();
        assert!(matches!(e.node(e.roots()[0]), Node::Pow(..)));
        let v = e.eval(&[rat(7, 3)]).unwrap();
        assert_eq!(v[0], rat(1, 1));
    }

    #[test]
    fn shared_subexpressions_intern_to_one_node() {
        let e = Expression::parse("9*(x-7)^99*(2*x+1)^43 - 11*(x-7)^999*(2*x+1)^3").unwrap();
        // (x-7) and (2x+1) each appear once in the graph
        let adds: Vec<_> = e
            .reachable()
            .into_iter()
            .filter(|&i| matches!(e.node(i), Node::Add(..)))
            .collect();
        assert_eq!(adds.len(), 3);
        assert_eq!(e.sigma_upper(), 3);
    }

    #[test]
    fn sigma_of_pure_power_is_zero() {
        assert_eq!(Expression::parse("x^5").unwrap().sigma_upper(), 0);
    }

    #[test]
    fn sigma_of_example_family_is_two() {
        // c3*x^a*(c1 x^b + d1 x^g)^d * [c2 (…)^e + d2 x^l (…)^m]^n with the
        // inner binomial shared: two distinct additions
        let t = "3*x^2*(x^3 + 2*x)^2*(5*(x^3 + 2*x)^4 + 7*x^3*(x^3 + 2*x)^2)^3";
        let e = Expression::parse(t).unwrap();
        assert_eq!(e.sigma_upper(), 2);
    }

    #[test]
    fn textual_duplication_does_not_change_sigma() {
        let once = Expression::parse("(x+1)^2").unwrap();
        let twice = Expression::parse("(x+1)*(x+1)").unwrap();
        assert_eq!(once.sigma_upper(), 1);
        assert_eq!(twice.sigma_upper(), 1);
    }

    #[test]
    fn subtraction_counts_one_addition() {
        let e = Expression::parse("x - 5").unwrap();
        assert_eq!(e.sigma_upper(), 1);
        let e2 = Expression::parse("x + -5").unwrap();
        assert_eq!(e2.sigma_upper(), 1);
        // identical graphs
        assert_eq!(e, e2);
    }

    #[test]
    fn render_roundtrip_on_handpicked_expressions() {
        let samples = [
            "x",
            "x^0",
            "9*(x-7)^99*(2*x+1)^43 - 11*(x-7)^999*(2*x+1)^3",
            "1/2*x^3 - 7/5",
            "x1*x2 + x3^2",
            "3*x^2*(x^3 + 2*x)^2*(5*(x^3 + 2*x)^4 + 7*x^3*(x^3 + 2*x)^2)^3",
            "-5",
            "-1*x + 2",
            "x - x",
        ];
        for s in samples {
            let e = Expression::parse(s).unwrap();
            let r = e.render();
            let e2 = Expression::parse(&r).unwrap_or_else(|err| {
                panic!("re-parse of {r:?} (from {s:?}) failed: {err}")
            });
            assert_eq!(e, e2, "roundtrip of {s:?} via {r:?}");
        }
    }

    #[test]
    fn eval_matches_hand_expansion() {
        let e = Expression::parse("x*(x^2 - 1)").unwrap();
        for (x, want) in [(0, 0), (1, 0), (2, 6), (-1, 0), (3, 24)] {
            let v = e.eval(&[rat(x, 1)]).unwrap();
            assert_eq!(v[0], rat(want, 1));
        }
    }

    #[test]
    fn multivariate_system_parse() {
        let e = Expression::parse_system("x1*x2 - 1; x1 + x2").unwrap();
        assert_eq!(e.roots().len(), 2);
        assert_eq!(e.n_vars(), 2);
        let v = e.eval(&[rat(2, 1), rat(3, 1)]).unwrap();
        assert_eq!(v, vec![rat(5, 1), rat(5, 1)]);
    }

    #[test]
    fn degree_bound_of_shared_example() {
        let e = Expression::parse("9*(x-7)^99*(2*x+1)^43 - 11*(x-7)^999*(2*x+1)^3").unwrap();
        assert_eq!(e.degree_bound()[0], BigUint::from(1002u32));
    }

    #[test]
    fn monotone_composition_of_sigma() {
        let pairs = [("x+1", "x^2-x"), ("(x+2)^3", "x-1"), ("x^4", "x+5")];
        for (a, b) in pairs {
            let fa = Expression::parse(a).unwrap().sigma_upper();
            let fb = Expression::parse(b).unwrap().sigma_upper();
            let prod = Expression::parse(&format!("({a})*({b})")).unwrap().sigma_upper();
            let sum = Expression::parse(&format!("({a})+({b})")).unwrap().sigma_upper();
            assert!(prod <= fa + fb);
            assert!(sum <= fa + fb + 1);
        }
    }
}
