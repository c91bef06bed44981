//! Exact arithmetic for additive-complexity root bounds.
//!
//! The crate measures how many additions an algebraic expression needs
//! (`σ̂`, and the straight-line length `τ̂`), evaluates validated upper
//! bounds on root counts over p-adic fields, number fields and ℝ in terms
//! of those measures, and verifies the bounds at desk scale against exact
//! root-counting oracles over ℚ, ℤ, ℝ and ℚ_p.
//!
//! Modules map onto the pipeline:
//!
//! * [`numeric`] — big rationals, p-adic valuations, and directed-rounding
//!   (always-upper) evaluation of real-valued bound formulas.
//! * [`expr`] — the expression DSL, shared-subexpression graphs, `σ̂`, and
//!   compilation to straight-line programs for `τ̂`.
//! * [`expand`] — budgeted expansion into sparse monomial form (term count
//!   `m`, degree, coefficients).
//! * [`bounds`] — every closed-form root-count bound as a validated upper
//!   real plus integer floor.
//! * [`reduce`] — the triangular gate system `G` built from a presentation,
//!   and its zero-pattern subsystems.
//! * [`oracles`] — exact root counting over ℝ (Sturm), ℚ/ℤ (divisor
//!   enumeration) and ℚ_p (Newton polygon + Hensel branching).
//! * [`gen`] / [`verify`] — seeded corpus generation and the end-to-end
//!   bound-vs-oracle verification pipeline.

pub mod bounds;
pub mod expand;
pub mod expr;
pub mod gen;
pub mod numeric;
pub mod oracles;
pub mod reduce;
pub mod verify;

/// Version tag carried by every JSON document the crate emits.
pub const JSON_SCHEMA: &str = "addbound/1";

pub use expand::{ExpandBudget, ExpandError, SparsePoly};
pub use expr::{Expression, ParseError, Slp};
pub use numeric::{floor_bound, up_eval, NumericError, Term, UpperReal, Valuation};
