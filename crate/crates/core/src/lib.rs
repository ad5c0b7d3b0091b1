//! Fuzzy-time temporal logic (FTL).
//!
//! FTL extends LTL with truth degrees in `[0, 1]` and with "almost" temporal
//! operators (soon, within, lasts, almost always, almost until) whose value
//! trades the number of ignored instants against a penalty given by an
//! [`AvoidingFunction`]. Connectives are interpreted by one of four
//! [`Interpretation`]s: Zadeh, Gödel-Dummett, Łukasiewicz or Product.
//!
//! The crate is `no_std` (it needs `alloc`). It provides:
//!
//! - the domain types ([`TruthDegree`], [`Formula`], [`Trace`], [`AvoidingFunction`]);
//! - the connective algebras ([`algebra`]);
//! - a textual syntax ([`parser`]);
//! - the evaluator over finite and lasso traces ([`eval`]);
//! - slow reference implementations used as test oracles ([`oracle`]);
//! - value-preserving rewrite rules and adequate-set lowering ([`rewrite`]).
//!
//! ```
//! use ftl_core::{parse, AvoidingFunction, EvalContext, Interpretation, Trace};
//!
//! let trace = Trace::new(vec!["p".into()], vec![vec![0.1], vec![0.2], vec![1.0], vec![0.1]], None).unwrap();
//! let eta = AvoidingFunction::new(vec![1.0, 0.5, 0.3]).unwrap();
//! let ctx = EvalContext::new(&trace, Interpretation::Zadeh, &eta);
//! let r = ftl_core::evaluate(&ctx, &parse("AG[2] p").unwrap(), 0).unwrap();
//! assert!((r.value.value() - 0.3).abs() < 1e-12);
//! ```
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
mod degree;
mod error;
pub mod eta;
pub mod eval;
mod formula;
pub mod oracle;
pub mod parser;
pub mod rewrite;
mod trace;

pub use algebra::{ops_for, ConnectiveOps, Interpretation};
pub use degree::TruthDegree;
pub use error::CoreError;
pub use eta::{eta_lookup, AvoidingFunction};
pub use eval::{
    almost_always_fast, eval_unbounded_lasso, evaluate, EvalContext, EvalError, EvalResult,
    Exactness, FinitePolicy,
};
pub use formula::{Bound, Formula};
pub use parser::{format, parse, SourceSpan, SyntaxError};
pub use trace::{trace_at, Trace};
