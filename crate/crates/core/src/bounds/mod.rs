//! Every closed-form root-count bound, evaluated as a validated upper real
//! plus integer floor.
//!
//! The univariate local bound (`thm1_bound`) and number-field bound
//! (`thm2_bound`) are written out exactly as displayed formulas. The
//! multivariate system bounds (`thm3_local` / `thm3_global`) assemble the
//! same truncation structure from B-terms; the B-term source is pluggable:
//! the arithmetic-Descartes product formula (default, with an exact-override
//! table carrying B(ℚ₂,3,1) = 6), or the worst-case-over-(e·f=d) envelope
//! terms that reproduce the closed univariate formulas bit-for-bit at n = 1.
//!
//! All formulas are nondecreasing in σ, every m_i, d, and δ, so evaluating
//! them at the presentation measure σ̂ ≥ σ keeps them valid.

use crate::numeric::interval::{ln_rat_enclosure, RatInterval};
use crate::numeric::primes::is_prime;
use crate::numeric::term::{binomial, factorial};
use crate::numeric::{floor_bound, NumericError, UpperReal};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// A degree d = e·f extension of ℚ_p: ramification index e, residue degree f,
/// residue field cardinality q = p^f.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalField {
    p: BigUint,
    e: u32,
    f: u32,
}

impl LocalField {
    pub fn new(p: BigUint, e: u32, f: u32) -> Result<Self, BoundsError> {
        if !is_prime(&p) {
            return Err(BoundsError::InvalidField(format!("{p} is not prime")));
        }
        if e < 1 || f < 1 {
            return Err(BoundsError::InvalidField(
                "ramification index and residue degree must be ≥ 1".into(),
            ));
        }
        Ok(LocalField { p, e, f })
    }

    pub fn qp(p: u32) -> Result<Self, BoundsError> {
        Self::new(BigUint::from(p), 1, 1)
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn d(&self) -> u32 {
        self.e * self.f
    }

    /// Residue field cardinality q = p^f.
    pub fn q(&self) -> BigUint {
        self.p.pow(self.f)
    }
}

impl fmt::Display for LocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 && self.f == 1 {
            write!(f, "Q{}", self.p)
        } else {
            write!(f, "Q{}(e={},f={})", self.p, self.e, self.f)
        }
    }
}

/// A degree-d number field with a root-degree budget δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GlobalField {
    d: u32,
    delta: u32,
}

impl GlobalField {
    pub fn new(d: u32, delta: u32) -> Result<Self, BoundsError> {
        if d < 1 || delta < 1 {
            return Err(BoundsError::InvalidField("d and δ must be ≥ 1".into()));
        }
        Ok(GlobalField { d, delta })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    fn dd(&self) -> u32 {
        self.d * self.delta
    }
}

impl fmt::Display for GlobalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NF(d={},delta={})", self.d, self.delta)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundsError {
    InvalidField(String),
    LengthMismatch { m: usize, n: usize },
    /// The Σ_{ℓ=3} type vector (2,…,2,3,…,3) needs ℓ ≥ n.
    IllFormedTypeVector { ell: u32, n: u32 },
    Numeric(NumericError),
}

impl fmt::Display for BoundsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundsError::InvalidField(s) => write!(f, "invalid field spec: {s}"),
            BoundsError::LengthMismatch { m, n } => {
                write!(f, "type vector length {m} != variable-count vector length {n}")
            }
            BoundsError::IllFormedTypeVector { ell, n } => {
                write!(f, "type vector ill-formed at level {ell} with n = {n} (needs ℓ ≥ n)")
            }
            BoundsError::Numeric(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for BoundsError {}

impl From<NumericError> for BoundsError {
    fn from(e: NumericError) -> Self {
        BoundsError::Numeric(e)
    }
}

/// One evaluated bound: validated real upper value and its integer floor.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub name: String,
    pub inputs: serde_json::Value,
    pub real_value: UpperReal,
    pub integer_value: BigInt,
    pub citation: String,
}

impl BoundReport {
    fn new(
        name: &str,
        inputs: serde_json::Value,
        real_value: UpperReal,
        citation: &str,
    ) -> Result<Self, BoundsError> {
        let integer_value = floor_bound(&real_value)?;
        Ok(BoundReport {
            name: name.to_string(),
            inputs,
            real_value,
            integer_value,
            citation: citation.to_string(),
        })
    }

    /// Report for an exactly known rational bound: the stored real is exact
    /// and the floor is the exact rational floor.
    fn exact(
        name: &str,
        inputs: serde_json::Value,
        value: &BigRational,
        prec: u32,
        citation: &str,
    ) -> Result<Self, BoundsError> {
        let need = (value.numer().bits() as u32 + 2).max(prec);
        let real_value = UpperReal::from_rational(value, need);
        if real_value.is_negative() {
            return Err(BoundsError::Numeric(NumericError::NegativeBound));
        }
        Ok(BoundReport {
            name: name.to_string(),
            inputs,
            real_value,
            integer_value: value.floor().to_integer(),
            citation: citation.to_string(),
        })
    }

    pub fn floor_u64(&self) -> Option<u64> {
        self.integer_value.to_u64()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "inputs": self.inputs,
            "real_upper": self.real_value.to_decimal_up(24),
            "floor": serde_json::Number::from_string_unchecked(self.integer_value.to_string()),
            "citation": self.citation,
        })
    }
}

// ---------------------------------------------------------------------------
// shared interval pieces

/// c = e/(e−1) ≤ 1.582.
fn c_interval(prec: u32) -> RatInterval {
    let e = crate::numeric::interval::euler_enclosure(prec);
    let one = RatInterval::one();
    e.div(&e.sub(&one)).expect("e - 1 is positive")
}

fn rat_u(n: u64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

fn rat_big(n: BigUint) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// ln of an exact positive rational, as an enclosure.
fn ln_point(q: &BigRational, prec: u32) -> Result<RatInterval, BoundsError> {
    Ok(ln_rat_enclosure(q, prec)?)
}

/// log_p(arg) for an interval argument and exact integer base ≥ 2.
fn log_base(arg: &RatInterval, base: &BigUint, prec: u32) -> Result<RatInterval, BoundsError> {
    let ln_base = ln_point(&rat_big(base.clone()), prec)?;
    let ln_arg = crate::numeric::interval::ln_interval(arg, prec).map_err(BoundsError::from)?;
    Ok(ln_arg.div(&ln_base)?)
}

/// The local AMD bracket 1 + e·log_p(e(m−1)/log p); requires m ≥ 2.
fn local_bracket(p: &BigUint, e: u32, m: u64, prec: u32) -> Result<RatInterval, BoundsError> {
    debug_assert!(m >= 2);
    let lnp = ln_point(&rat_big(p.clone()), prec)?;
    let arg = RatInterval::point(rat_u(e as u64 * (m - 1))).div(&lnp)?;
    Ok(RatInterval::one().add(&log_base(&arg, p, prec)?.scale(&rat_u(e as u64))))
}

/// The global AMD bracket 1 + 2d²δ²·log₂(d²δ²(m−1)/log 2); requires m ≥ 2.
fn global_bracket(dd2: u64, m: u64, prec: u32) -> Result<RatInterval, BoundsError> {
    debug_assert!(m >= 2);
    let two = BigUint::from(2u32);
    let ln2 = ln_point(&rat_u(2), prec)?;
    let arg = RatInterval::point(rat_u(dd2 * (m - 1))).div(&ln2)?;
    Ok(RatInterval::one().add(&log_base(&arg, &two, prec)?.scale(&rat_u(2 * dd2))))
}

/// log₂(k·dδ/log 2), the Lenstra-global log factor.
fn global_log_factor(k_dd: u64, prec: u32) -> Result<RatInterval, BoundsError> {
    let two = BigUint::from(2u32);
    let ln2 = ln_point(&rat_u(2), prec)?;
    let arg = RatInterval::point(rat_u(k_dd)).div(&ln2)?;
    log_base(&arg, &two, prec)
}

fn report_value(
    name: &str,
    inputs: serde_json::Value,
    value: RatInterval,
    prec: u32,
    citation: &str,
) -> Result<BoundReport, BoundsError> {
    BoundReport::new(name, inputs, UpperReal::from_interval_hi(&value, prec), citation)
}

// ---------------------------------------------------------------------------
// arithmetic multivariate Descartes bounds

/// B(L, m, N) ≤ c^n q^n Π m_i(m_i−1)N_i[1 + e·log_p(e(m_i−1)/log p)].
/// Zero as soon as any m_i = 1: a monomial has no roots in L*.
pub fn amd_local_b_value(
    spec: &LocalField,
    m: &[u64],
    n_vars: &[u64],
    prec: u32,
) -> Result<RatInterval, BoundsError> {
    if m.len() != n_vars.len() || m.is_empty() {
        return Err(BoundsError::LengthMismatch {
            m: m.len(),
            n: n_vars.len(),
        });
    }
    if m.iter().any(|&mi| mi < 1) || n_vars.iter().any(|&ni| ni < 1) {
        return Err(BoundsError::InvalidField("m_i and N_i must be ≥ 1".into()));
    }
    if m.iter().any(|&mi| mi == 1) {
        return Ok(RatInterval::zero());
    }
    let n = m.len() as u32;
    let c = c_interval(prec);
    let mut total = c.pow(n).scale(&rat_big(spec.q().pow(n)));
    for (&mi, &ni) in m.iter().zip(n_vars) {
        let bracket = local_bracket(&spec.p, spec.e, mi, prec)?;
        total = total.mul(&bracket).scale(&rat_u(mi * (mi - 1) * ni));
    }
    Ok(total)
}

pub fn amd_local_b(
    spec: &LocalField,
    m: &[u64],
    n_vars: &[u64],
    prec: u32,
) -> Result<BoundReport, BoundsError> {
    let v = amd_local_b_value(spec, m, n_vars, prec)?;
    report_value(
        "amd_local_B",
        serde_json::json!({"field": spec.to_string(), "m": m, "N": n_vars}),
        v,
        prec,
        "arithmetic multivariate Descartes bound B(L,m,N), local case",
    )
}

/// A(L, δ, m, N) ≤ 2c^n 2^{dδn} Π m_i(m_i−1)N_i[1 + 2d²δ²log₂(d²δ²(m_i−1)/log 2)].
pub fn amd_global_a_value(
    spec: &GlobalField,
    m: &[u64],
    n_vars: &[u64],
    prec: u32,
) -> Result<RatInterval, BoundsError> {
    if m.len() != n_vars.len() || m.is_empty() {
        return Err(BoundsError::LengthMismatch {
            m: m.len(),
            n: n_vars.len(),
        });
    }
    if m.iter().any(|&mi| mi < 1) || n_vars.iter().any(|&ni| ni < 1) {
        return Err(BoundsError::InvalidField("m_i and N_i must be ≥ 1".into()));
    }
    if m.iter().any(|&mi| mi == 1) {
        return Ok(RatInterval::zero());
    }
    let n = m.len() as u32;
    let dd = spec.dd() as u64;
    let dd2 = dd * dd;
    let c = c_interval(prec);
    let two_pow = BigUint::from(2u32).pow(spec.dd() * n);
    let mut total = c.pow(n).scale(&(rat_u(2) * rat_big(two_pow)));
    for (&mi, &ni) in m.iter().zip(n_vars) {
        let bracket = global_bracket(dd2, mi, prec)?;
        total = total.mul(&bracket).scale(&rat_u(mi * (mi - 1) * ni));
    }
    Ok(total)
}

pub fn amd_global_a(
    spec: &GlobalField,
    m: &[u64],
    n_vars: &[u64],
    prec: u32,
) -> Result<BoundReport, BoundsError> {
    let v = amd_global_a_value(spec, m, n_vars, prec)?;
    report_value(
        "amd_global_A",
        serde_json::json!({"field": spec.to_string(), "m": m, "N": n_vars}),
        v,
        prec,
        "arithmetic multivariate Descartes bound A(L,δ,m,N), global case",
    )
}

// ---------------------------------------------------------------------------
// m-term (Lenstra) bounds

/// c(q−1)(m−1)²(1 + e·log_p(e(m−1)/log p)) roots in L*, multiplicities counted.
pub fn lenstra_local_value(
    spec: &LocalField,
    m: u64,
    prec: u32,
) -> Result<RatInterval, BoundsError> {
    if m < 1 {
        return Err(BoundsError::InvalidField("m must be ≥ 1".into()));
    }
    if m == 1 {
        return Ok(RatInterval::zero());
    }
    let c = c_interval(prec);
    let q1 = rat_big(spec.q()) - BigRational::one();
    let bracket = local_bracket(&spec.p, spec.e, m, prec)?;
    Ok(c.mul(&bracket).scale(&(q1 * rat_u((m - 1) * (m - 1)))))
}

pub fn lenstra_local(spec: &LocalField, m: u64, prec: u32) -> Result<BoundReport, BoundsError> {
    let v = lenstra_local_value(spec, m, prec)?;
    report_value(
        "lenstra_local",
        serde_json::json!({"field": spec.to_string(), "m": m}),
        v,
        prec,
        "m-term bound on roots in L*, local case (counting multiplicities)",
    )
}

/// c(m−1)²(dδ+10)·2^{dδ+1}·log₂(dδ(m−1)/log 2) roots in C* of degree ≤ δ.
pub fn lenstra_global_value(
    spec: &GlobalField,
    m: u64,
    prec: u32,
) -> Result<RatInterval, BoundsError> {
    if m < 1 {
        return Err(BoundsError::InvalidField("m must be ≥ 1".into()));
    }
    if m == 1 {
        return Ok(RatInterval::zero());
    }
    let c = c_interval(prec);
    let dd = spec.dd() as u64;
    let log = global_log_factor(dd * (m - 1), prec)?;
    let k = rat_u((m - 1) * (m - 1))
        * rat_u(dd + 10)
        * rat_big(BigUint::from(2u32).pow(spec.dd() + 1));
    Ok(c.mul(&log).scale(&k))
}

pub fn lenstra_global(spec: &GlobalField, m: u64, prec: u32) -> Result<BoundReport, BoundsError> {
    let v = lenstra_global_value(spec, m, prec)?;
    report_value(
        "lenstra_global",
        serde_json::json!({"field": spec.to_string(), "m": m}),
        v,
        prec,
        "m-term bound on roots of degree ≤ δ over L, global case (counting multiplicities)",
    )
}

// ---------------------------------------------------------------------------
// the closed univariate formulas

/// The displayed univariate local bound over any degree-d extension of ℚ_p:
/// 1 + dp(p^d−1)/(p−1) + 4cdp(p^d−1)²/(p−1)·(1+d·log_p(2d/log p))
///   + (1/3)·Σ_{j=3}^{σ} j(6c)^j (p^d−1)^j (1+d·log_p(d/log p))(1+d·log_p(2d/log p))^{j−1} j!,
/// truncated to the first σ+1 summands when σ ≤ 2.
pub fn thm1_value(p: &BigUint, d: u32, sigma: u32, prec: u32) -> Result<RatInterval, BoundsError> {
    if !is_prime(p) {
        return Err(BoundsError::InvalidField(format!("{p} is not prime")));
    }
    let mut total = RatInterval::one();
    if sigma >= 1 {
        total = total.add(&RatInterval::point(thm1_second_summand(p, d)));
    }
    if sigma >= 2 {
        let c = c_interval(prec);
        let br_b = envelope_bracket(p, d, 2, prec)?;
        let pd1 = rat_big(p.pow(d)) - BigRational::one();
        let k = rat_u(4 * d as u64) * rat_big(p.clone()) * &pd1 * &pd1
            / (rat_big(p.clone()) - BigRational::one());
        total = total.add(&c.mul(&br_b).scale(&k));
    }
    if sigma >= 3 {
        let c = c_interval(prec);
        let br_a = envelope_bracket(p, d, 1, prec)?;
        let br_b = envelope_bracket(p, d, 2, prec)?;
        let mut tail = RatInterval::zero();
        for j in 3..=sigma {
            tail = tail.add(&thm1_tail_term(&c, p, d, j, &br_a, &br_b));
        }
        total = total.add(&tail.scale(&BigRational::new(BigInt::one(), BigInt::from(3))));
    }
    Ok(total)
}

/// dp(p^d−1)/(p−1): the worst-case-over-(e·f=d) roots-of-unity envelope.
fn thm1_second_summand(p: &BigUint, d: u32) -> BigRational {
    let pd1 = rat_big(p.pow(d)) - BigRational::one();
    rat_u(d as u64) * rat_big(p.clone()) * pd1 / (rat_big(p.clone()) - BigRational::one())
}

/// 1 + d·log_p(k·d/log p): the bracket with e replaced by its envelope d.
fn envelope_bracket(p: &BigUint, d: u32, k: u64, prec: u32) -> Result<RatInterval, BoundsError> {
    let lnp = ln_point(&rat_big(p.clone()), prec)?;
    let arg = RatInterval::point(rat_u(k * d as u64)).div(&lnp)?;
    Ok(RatInterval::one().add(&log_base(&arg, p, prec)?.scale(&rat_u(d as u64))))
}

/// j(6c)^j (p^d−1)^j · brA · brB^{j−1} · j!  (without the leading 1/3).
fn thm1_tail_term(
    c: &RatInterval,
    p: &BigUint,
    d: u32,
    j: u32,
    br_a: &RatInterval,
    br_b: &RatInterval,
) -> RatInterval {
    let pd1 = rat_big(p.pow(d)) - BigRational::one();
    let mut k = rat_u(j as u64) * rat_big(factorial(j));
    let mut pd1_pow = BigRational::one();
    for _ in 0..j {
        pd1_pow *= &pd1;
    }
    k *= pd1_pow;
    c.scale(&rat_u(6)).pow(j).mul(br_a).mul(&br_b.pow(j - 1)).scale(&k)
}

pub fn thm1_bound(p: &BigUint, d: u32, sigma: u32, prec: u32) -> Result<BoundReport, BoundsError> {
    let v = thm1_value(p, d, sigma, prec)?;
    report_value(
        "thm1",
        serde_json::json!({"p": p.to_string(), "d": d, "sigma": sigma}),
        v,
        prec,
        "additive-complexity bound on roots in a degree-d extension of Q_p",
    )
}

/// Exact rational bound e·p(q−1)/(p−1) on the number of roots of unity in L
/// (which equals B(L,2,1)).
pub fn roots_of_unity_value(spec: &LocalField) -> BigRational {
    let q1 = rat_big(spec.q()) - BigRational::one();
    rat_u(spec.e as u64) * rat_big(spec.p.clone()) * q1
        / (rat_big(spec.p.clone()) - BigRational::one())
}

pub fn roots_of_unity_bound(spec: &LocalField, prec: u32) -> Result<BoundReport, BoundsError> {
    BoundReport::exact(
        "roots_of_unity",
        serde_json::json!({"field": spec.to_string()}),
        &roots_of_unity_value(spec),
        prec,
        "bound on the roots of unity in L (= B(L,2,1))",
    )
}

/// How the B(L,3,1) term of the sharpened bound is chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum B3Source {
    /// exact-override table first (B(ℚ₂,3,1) = 6), then the AMD formula
    Auto,
    /// force the AMD formula
    Amd,
    /// caller-supplied exact value
    Exact(BigRational),
}

/// The B(ℚ₂,3,1) = 6 entry; the table is the extension point for any further
/// exactly-known values.
pub fn exact_b_override(spec: &LocalField, m: &[u64], n_vars: &[u64]) -> Option<BigRational> {
    if spec.p == BigUint::from(2u32) && spec.e == 1 && spec.f == 1 && m == [3] && n_vars == [1] {
        return Some(rat_u(6));
    }
    None
}

/// Sharpened local bound: the first three summands replaced by
/// 1 + e·p(q−1)/(p−1) + e·p(q−1)·B(L,3,1)/(p−1); the j ≥ 3 tail unchanged.
pub fn thm1_sharpened(
    spec: &LocalField,
    sigma: u32,
    b3: B3Source,
    prec: u32,
) -> Result<BoundReport, BoundsError> {
    let b3_value: RatInterval = match &b3 {
        B3Source::Exact(v) => RatInterval::point(v.clone()),
        B3Source::Auto => match exact_b_override(spec, &[3], &[1]) {
            Some(v) => RatInterval::point(v),
            None => amd_local_b_value(spec, &[3], &[1], prec)?,
        },
        B3Source::Amd => amd_local_b_value(spec, &[3], &[1], prec)?,
    };
    let ru = roots_of_unity_value(spec);
    let mut total = RatInterval::one();
    if sigma >= 1 {
        total = total.add(&RatInterval::point(ru.clone()));
    }
    if sigma >= 2 {
        total = total.add(&b3_value.scale(&ru));
    }
    if sigma >= 3 {
        let p = &spec.p;
        let d = spec.d();
        let c = c_interval(prec);
        let br_a = envelope_bracket(p, d, 1, prec)?;
        let br_b = envelope_bracket(p, d, 2, prec)?;
        let mut tail = RatInterval::zero();
        for j in 3..=sigma {
            tail = tail.add(&thm1_tail_term(&c, p, d, j, &br_a, &br_b));
        }
        total = total.add(&tail.scale(&BigRational::new(BigInt::one(), BigInt::from(3))));
    }
    report_value(
        "thm1_sharpened",
        serde_json::json!({
            "field": spec.to_string(), "sigma": sigma,
            "b3": match &b3 { B3Source::Auto => "auto".to_string(), B3Source::Amd => "amd".to_string(), B3Source::Exact(v) => v.to_string() },
        }),
        total,
        prec,
        "sharpened local bound via roots of unity and B(L,3,1)",
    )
}

/// The displayed number-field bound:
/// 1 + c(dδ+10)2^{dδ+1}log₂(dδ/log 2)
///   + c²(dδ+10)²4^{dδ+2}log₂(dδ/log 2)log₂(2dδ/log 2)
///   + (2/3)Σ_{j=3}^{σ} j(6c)^j 2^{dδj}(1+2d²δ²log₂(d²δ²/log 2))(1+2d²δ²log₂(2d²δ²/log 2))^{j−1} j!,
/// truncated to the first σ+1 summands when σ ≤ 2.
pub fn thm2_value(spec: &GlobalField, sigma: u32, prec: u32) -> Result<RatInterval, BoundsError> {
    let dd = spec.dd() as u64;
    let c = c_interval(prec);
    let mut total = RatInterval::one();
    if sigma >= 1 {
        let log1 = global_log_factor(dd, prec)?;
        let k = rat_u(dd + 10) * rat_big(BigUint::from(2u32).pow(spec.dd() + 1));
        total = total.add(&c.mul(&log1).scale(&k));
    }
    if sigma >= 2 {
        let log1 = global_log_factor(dd, prec)?;
        let log2 = global_log_factor(2 * dd, prec)?;
        let k = rat_u((dd + 10) * (dd + 10)) * rat_big(BigUint::from(4u32).pow(spec.dd() + 2));
        total = total.add(&c.pow(2).mul(&log1).mul(&log2).scale(&k));
    }
    if sigma >= 3 {
        let dd2 = dd * dd;
        let br_a = global_bracket(dd2, 2, prec)?;
        let br_b = global_bracket(dd2, 3, prec)?;
        let mut tail = RatInterval::zero();
        for j in 3..=sigma {
            tail = tail.add(&thm2_tail_term(&c, spec, j, &br_a, &br_b));
        }
        total = total.add(&tail.scale(&BigRational::new(BigInt::from(2), BigInt::from(3))));
    }
    Ok(total)
}

/// j(6c)^j 2^{dδj} · brA · brB^{j−1} · j!  (without the leading 2/3).
fn thm2_tail_term(
    c: &RatInterval,
    spec: &GlobalField,
    j: u32,
    br_a: &RatInterval,
    br_b: &RatInterval,
) -> RatInterval {
    let k = rat_u(j as u64)
        * rat_big(factorial(j))
        * rat_big(BigUint::from(2u32).pow(spec.dd() * j));
    c.scale(&rat_u(6)).pow(j).mul(br_a).mul(&br_b.pow(j - 1)).scale(&k)
}

pub fn thm2_bound(d: u32, delta: u32, sigma: u32, prec: u32) -> Result<BoundReport, BoundsError> {
    let spec = GlobalField::new(d, delta)?;
    let v = thm2_value(&spec, sigma, prec)?;
    report_value(
        "thm2",
        serde_json::json!({"d": d, "delta": delta, "sigma": sigma}),
        v,
        prec,
        "additive-complexity bound on roots of degree ≤ δ over a degree-d number field",
    )
}

// ---------------------------------------------------------------------------
// multivariate assembly

/// Where the B(L,·,·) / A(L,δ,·,·) terms of the system bounds come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BTerms {
    /// the printed product formula, consulting the exact-override table
    Amd,
    /// the printed product formula, overrides disabled
    AmdNoOverrides,
    /// the closed univariate formula's envelope terms (n = 1 only)
    Envelope,
}

/// Third-summand convention: the statement's 1 + B·B₃, or the proof's
/// r_n + B·B₃ with r_n = 0 for n = 1 and 1 for n ≥ 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Thm3Variant {
    Statement,
    Proof,
}

fn thm3_type_vectors(n: u32, ell: u32) -> Result<(Vec<u64>, Vec<u64>), BoundsError> {
    if ell < n {
        return Err(BoundsError::IllFormedTypeVector { ell, n });
    }
    let mut m = vec![2u64; n as usize];
    m.extend(std::iter::repeat(3u64).take((ell - n) as usize));
    // N = (n+1, n+2, …, n+ℓ−1, n+ℓ−1)
    let mut nv: Vec<u64> = (1..ell).map(|i| (n + i) as u64).collect();
    nv.push((n + ell - 1) as u64);
    Ok((m, nv))
}

fn local_b_term(
    spec: &LocalField,
    terms: BTerms,
    m: &[u64],
    n_vars: &[u64],
    prec: u32,
) -> Result<RatInterval, BoundsError> {
    match terms {
        BTerms::Amd => match exact_b_override(spec, m, n_vars) {
            Some(v) => Ok(RatInterval::point(v)),
            None => amd_local_b_value(spec, m, n_vars, prec),
        },
        BTerms::AmdNoOverrides => amd_local_b_value(spec, m, n_vars, prec),
        BTerms::Envelope => envelope_local_b(spec.p(), spec.d(), m, n_vars, prec),
    }
}

/// The worst-case-over-(e·f=d) B-terms hiding inside the closed univariate
/// formula: dp(p^d−1)/(p−1) for (2,1); 4c(p^d−1)(1+d·log_p(2d/log p)) for
/// (3,1); and (1/3)ℓ(6c)^ℓ(p^d−1)^ℓ·brA·brB^{ℓ−1}·ℓ! for the Σ_{ℓ≥3} shape.
fn envelope_local_b(
    p: &BigUint,
    d: u32,
    m: &[u64],
    n_vars: &[u64],
    prec: u32,
) -> Result<RatInterval, BoundsError> {
    if m == [2] && n_vars == [1] {
        return Ok(RatInterval::point(thm1_second_summand(p, d)));
    }
    if m == [3] && n_vars == [1] {
        let c = c_interval(prec);
        let pd1 = rat_big(p.pow(d)) - BigRational::one();
        let br_b = envelope_bracket(p, d, 2, prec)?;
        return Ok(c.mul(&br_b).scale(&(rat_u(4) * pd1)));
    }
    // the univariate Σ_{ℓ≥3} shape: type (2, 3, …, 3), N = (2, 3, …, ℓ, ℓ)
    let ell = m.len() as u32;
    let expected = thm3_type_vectors(1, ell)?;
    if m != expected.0 || n_vars != expected.1 {
        return Err(BoundsError::InvalidField(
            "envelope B-terms exist only for the univariate assembly shapes".into(),
        ));
    }
    let c = c_interval(prec);
    let br_a = envelope_bracket(p, d, 1, prec)?;
    let br_b = envelope_bracket(p, d, 2, prec)?;
    Ok(thm1_tail_term(&c, p, d, ell, &br_a, &br_b)
        .scale(&BigRational::new(BigInt::one(), BigInt::from(3))))
}

/// Geometrically isolated roots in L^n of a system with additive complexity σ:
/// 1 + B(L,2,1) + (1 + B(L,2,1)·B(L,3,1)) + Σ_{ℓ=3}^{σ} C(n+ℓ−1, n−1)·B(L, type(ℓ), N(ℓ)),
/// first σ+1 summands when σ ≤ 2.
pub fn thm3_local_value(
    n: u32,
    sigma: u32,
    spec: &LocalField,
    terms: BTerms,
    variant: Thm3Variant,
    prec: u32,
) -> Result<RatInterval, BoundsError> {
    if n < 1 {
        return Err(BoundsError::InvalidField("n must be ≥ 1".into()));
    }
    let mut total = RatInterval::one();
    if sigma >= 1 {
        total = total.add(&local_b_term(spec, terms, &[2], &[1], prec)?);
    }
    if sigma >= 2 {
        let b2 = local_b_term(spec, terms, &[2], &[1], prec)?;
        let b3 = local_b_term(spec, terms, &[3], &[1], prec)?;
        let r = match variant {
            Thm3Variant::Statement => 1,
            Thm3Variant::Proof => u64::from(n >= 2),
        };
        total = total.add(&RatInterval::point(rat_u(r))).add(&b2.mul(&b3));
    }
    for ell in 3..=sigma {
        let (m, nv) = thm3_type_vectors(n, ell)?;
        let b = local_b_term(spec, terms, &m, &nv, prec)?;
        total = total.add(&b.scale(&rat_big(binomial(n + ell - 1, n - 1))));
    }
    Ok(total)
}

pub fn thm3_local(
    n: u32,
    sigma: u32,
    spec: &LocalField,
    terms: BTerms,
    variant: Thm3Variant,
    prec: u32,
) -> Result<BoundReport, BoundsError> {
    let v = thm3_local_value(n, sigma, spec, terms, variant, prec)?;
    report_value(
        "thm3_local",
        serde_json::json!({
            "n": n, "sigma": sigma, "field": spec.to_string(),
            "terms": format!("{terms:?}"), "variant": format!("{variant:?}"),
        }),
        v,
        prec,
        "system bound on geometrically isolated roots in L^n, local case",
    )
}

fn global_a_term(
    spec: &GlobalField,
    terms: BTerms,
    m: &[u64],
    n_vars: &[u64],
    prec: u32,
) -> Result<RatInterval, BoundsError> {
    match terms {
        BTerms::Amd | BTerms::AmdNoOverrides => amd_global_a_value(spec, m, n_vars, prec),
        BTerms::Envelope => envelope_global_a(spec, m, n_vars, prec),
    }
}

/// Envelope A-terms of the closed number-field formula: the Lenstra-global
/// m = 2, 3 terms for (2,1) and (3,1), the printed Σ_{ℓ≥3} summand otherwise.
fn envelope_global_a(
    spec: &GlobalField,
    m: &[u64],
    n_vars: &[u64],
    prec: u32,
) -> Result<RatInterval, BoundsError> {
    let c = c_interval(prec);
    let dd = spec.dd() as u64;
    if m == [2] && n_vars == [1] {
        let log1 = global_log_factor(dd, prec)?;
        let k = rat_u(dd + 10) * rat_big(BigUint::from(2u32).pow(spec.dd() + 1));
        return Ok(c.mul(&log1).scale(&k));
    }
    if m == [3] && n_vars == [1] {
        let log2 = global_log_factor(2 * dd, prec)?;
        let k = rat_u(4) * rat_u(dd + 10) * rat_big(BigUint::from(2u32).pow(spec.dd() + 1));
        return Ok(c.mul(&log2).scale(&k));
    }
    let ell = m.len() as u32;
    let expected = thm3_type_vectors(1, ell)?;
    if m != expected.0 || n_vars != expected.1 {
        return Err(BoundsError::InvalidField(
            "envelope A-terms exist only for the univariate assembly shapes".into(),
        ));
    }
    let dd2 = dd * dd;
    let br_a = global_bracket(dd2, 2, prec)?;
    let br_b = global_bracket(dd2, 3, prec)?;
    Ok(thm2_tail_term(&c, spec, ell, &br_a, &br_b)
        .scale(&BigRational::new(BigInt::from(2), BigInt::from(3))))
}

pub fn thm3_global_value(
    n: u32,
    sigma: u32,
    spec: &GlobalField,
    terms: BTerms,
    variant: Thm3Variant,
    prec: u32,
) -> Result<RatInterval, BoundsError> {
    if n < 1 {
        return Err(BoundsError::InvalidField("n must be ≥ 1".into()));
    }
    let mut total = RatInterval::one();
    if sigma >= 1 {
        total = total.add(&global_a_term(spec, terms, &[2], &[1], prec)?);
    }
    if sigma >= 2 {
        let a2 = global_a_term(spec, terms, &[2], &[1], prec)?;
        let a3 = global_a_term(spec, terms, &[3], &[1], prec)?;
        let r = match variant {
            Thm3Variant::Statement => 1,
            Thm3Variant::Proof => u64::from(n >= 2),
        };
        total = total.add(&RatInterval::point(rat_u(r))).add(&a2.mul(&a3));
    }
    for ell in 3..=sigma {
        let (m, nv) = thm3_type_vectors(n, ell)?;
        let a = global_a_term(spec, terms, &m, &nv, prec)?;
        total = total.add(&a.scale(&rat_big(binomial(n + ell - 1, n - 1))));
    }
    Ok(total)
}

pub fn thm3_global(
    n: u32,
    sigma: u32,
    spec: &GlobalField,
    terms: BTerms,
    variant: Thm3Variant,
    prec: u32,
) -> Result<BoundReport, BoundsError> {
    let v = thm3_global_value(n, sigma, spec, terms, variant, prec)?;
    report_value(
        "thm3_global",
        serde_json::json!({
            "n": n, "sigma": sigma, "field": spec.to_string(),
            "terms": format!("{terms:?}"), "variant": format!("{variant:?}"),
        }),
        v,
        prec,
        "system bound on geometrically isolated roots of degree ≤ δ, global case",
    )
}

// ---------------------------------------------------------------------------
// exact integer bounds

/// (σ+2)^{3σ+1} · 2^{(9σ²+5σ+2)/2}, exactly. The exponent is always integral.
pub fn risler_real_value(sigma: u32) -> BigUint {
    let s = sigma as u64;
    let base = BigUint::from(s + 2);
    let e2 = (9 * s * s + 5 * s + 2) / 2;
    base.pow((3 * s + 1) as u32) * BigUint::from(2u32).pow(e2 as u32)
}

pub fn risler_real(sigma: u32, prec: u32) -> Result<BoundReport, BoundsError> {
    let v = rat_big(risler_real_value(sigma));
    BoundReport::exact(
        "risler_real",
        serde_json::json!({"sigma": sigma}),
        &v,
        prec,
        "real-root bound in terms of additive complexity over R",
    )
}

/// 15 + σ²·(2401/100)^σ·σ!, exactly.
pub fn abstract_rational_value(sigma: u32) -> BigRational {
    if sigma == 0 {
        return rat_u(15);
    }
    let base = BigRational::new(BigInt::from(2401), BigInt::from(100));
    let mut pow = BigRational::one();
    for _ in 0..sigma {
        pow *= &base;
    }
    rat_u(15) + rat_u(sigma as u64 * sigma as u64) * pow * rat_big(factorial(sigma))
}

pub fn abstract_rational_bound(sigma: u32, prec: u32) -> Result<BoundReport, BoundsError> {
    BoundReport::exact(
        "abstract_sigma",
        serde_json::json!({"sigma": sigma}),
        &abstract_rational_value(sigma),
        prec,
        "rational-root bound 15 + σ²(24.01)^σ σ!",
    )
}

/// 2^τ: the degree bound on integral roots.
pub fn tau_trivial_value(tau: u32) -> BigUint {
    BigUint::from(2u32).pow(tau)
}

pub fn tau_trivial_bound(tau: u32, prec: u32) -> Result<BoundReport, BoundsError> {
    BoundReport::exact(
        "tau_trivial",
        serde_json::json!({"tau": tau}),
        &rat_big(tau_trivial_value(tau)),
        prec,
        "integral-root bound 2^τ via the degree",
    )
}

/// The iterated-exponential real-root bound with caller-supplied constant K.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TowerBound {
    Exact(BigUint),
    /// Refused to materialize past 10⁶ digits.
    Overflow {
        /// e.g. "2^2^2^16"
        symbolic: String,
        /// decimal digits of the first unmaterialized level (estimate)
        approx_digits: BigUint,
        /// exponentiations beyond that level
        remaining_levels: u32,
    },
}

/// 2↑2↑…↑2^{⌈Kσ⌉} with σ−1 exponentiations beyond the top:
/// T₀ = 2^{⌈Kσ⌉}, T_{i+1} = 2^{T_i}, result T_{σ−1}.
/// σ=1,K=1 → 2; σ=3,K=1 → 2^(2^8) = 2^256.
pub fn borodin_cook_tower(sigma: u32, k: &BigRational) -> Result<TowerBound, BoundsError> {
    if sigma < 1 || !k.is_positive() {
        return Err(BoundsError::InvalidField(
            "tower bound needs σ ≥ 1 and K > 0".into(),
        ));
    }
    // ⌈Kσ⌉ exactly
    let ks = k * rat_u(sigma as u64);
    let top = ks.ceil().to_integer().to_biguint().expect("positive");
    let max_exp = BigUint::from(3_321_928u64); // 10^6 digits ≈ 2^3321928
    let digits_of_pow2 = |e: &BigUint| -> BigUint {
        // digits(2^e) ≈ e·log10(2); 30103/100000 approximates log10 2
        e * BigUint::from(30103u64) / BigUint::from(100_000u64) + BigUint::one()
    };
    let mut symbolic = format!("2^{top}");
    let mut cur = if top <= max_exp {
        BigUint::from(2u32).pow(top.to_u32().expect("bounded"))
    } else {
        return Ok(TowerBound::Overflow {
            symbolic,
            approx_digits: digits_of_pow2(&top),
            remaining_levels: sigma - 1,
        });
    };
    for level in 1..sigma {
        if cur > max_exp {
            return Ok(TowerBound::Overflow {
                symbolic: format!("2^{symbolic}"),
                approx_digits: digits_of_pow2(&cur),
                remaining_levels: sigma - 1 - level,
            });
        }
        symbolic = format!("2^{symbolic}");
        cur = BigUint::from(2u32).pow(cur.to_u32().expect("bounded"));
    }
    Ok(TowerBound::Exact(cur))
}

#[cfg(test)]
mod tests;
