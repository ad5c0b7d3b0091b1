//! Slow reference implementations.
//!
//! Each oracle computes the defining expression literally (subset
//! enumeration, direct maxima, growing horizons, boolean LTL) and shares no
//! selection or limit logic with [`crate::eval`].

use alloc::string::String;

use thiserror::Error;

use crate::algebra::Interpretation;
use crate::eval::{eta_atom_index, EvalError};
use crate::{evaluate, AvoidingFunction, EvalContext, Formula, Trace, TruthDegree};

/// Largest `t` accepted by the enumeration oracle.
pub const MAX_ENUMERATION_WINDOW: u32 = 20;
/// Loop budget of [`oracle_limit`].
pub const LIMIT_LOOP_BUDGET: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrispVerdict {
    pub value: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("window t = {t} exceeds the enumeration limit {max}")]
    WindowTooLarge { t: u32, max: u32 },
    #[error("trace is not a lasso")]
    NotALasso,
    #[error("no convergence after {loops} loops (last values {previous} and {last})")]
    NoConvergence { loops: usize, previous: f64, last: f64 },
    #[error("atom `{atom}` has non-crisp value {value} at position {pos}")]
    NotCrisp { atom: String, pos: usize, value: f64 },
    #[error("unsupported formula: {0}")]
    Unsupported(&'static str),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// `AG[t] φ` at `pos` by enumerating every avoidance subset of the window.
pub fn oracle_almost_always(
    ctx: &EvalContext<'_>,
    phi: &Formula,
    pos: usize,
    t: u32,
) -> Result<TruthDegree, OracleError> {
    if t > MAX_ENUMERATION_WINDOW {
        return Err(OracleError::WindowTooLarge {
            t,
            max: MAX_ENUMERATION_WINDOW,
        });
    }
    let mut vals = [0.0; MAX_ENUMERATION_WINDOW as usize + 1];
    for (d, v) in vals[..=t as usize].iter_mut().enumerate() {
        *v = evaluate(ctx, phi, pos + d)?.value.value();
    }
    let v = almost_always_enumerate(ctx.interp, ctx.eta, &vals[..=t as usize]);
    Ok(TruthDegree::new(v).expect("degree"))
}

/// Maximum over `j ≤ min(t, n_η−1)` and over every `j`-subset `H` of the
/// window of `η(j) · ⊗(window \ H)`, folding ⊗ in position order.
///
/// Panics if the window is longer than `MAX_ENUMERATION_WINDOW + 1`.
pub fn almost_always_enumerate(interp: Interpretation, eta: &AvoidingFunction, vals: &[f64]) -> f64 {
    let n = vals.len();
    assert!(n >= 1 && n <= MAX_ENUMERATION_WINDOW as usize + 1);
    let jmax = (n - 1).min(eta.n_eta() - 1);
    let mut best: f64 = 0.0;
    for mask in 0u32..(1 << n) {
        let j = mask.count_ones() as usize;
        if j > jmax {
            continue;
        }
        let mut prod = 1.0;
        for (h, &v) in vals.iter().enumerate() {
            if mask & (1 << h) == 0 {
                prod = interp.tnorm(prod, v);
            }
        }
        best = best.max(eta.weight(j) * prod);
    }
    best
}

/// Direct maximum formula for `φ U[t] ψ` and `φ AU[t] ψ`.
///
/// The φ-prefix of every candidate is recomputed from scratch; for `AU` it is
/// the enumeration oracle `AG[k−1] φ`.
pub fn oracle_until(ctx: &EvalContext<'_>, f: &Formula, pos: usize) -> Result<TruthDegree, OracleError> {
    let (t, phi, psi, almost) = match f {
        Formula::UntilB(t, a, b) => (*t, a, b, false),
        Formula::AlmostUntilB(t, a, b) => (*t, a, b, true),
        _ => return Err(OracleError::Unsupported("expected U[t] or AU[t]")),
    };
    if almost && t > MAX_ENUMERATION_WINDOW + 1 {
        return Err(OracleError::WindowTooLarge {
            t,
            max: MAX_ENUMERATION_WINDOW + 1,
        });
    }
    let interp = ctx.interp;
    let mut best: f64 = 0.0;
    for k in 0..=t as usize {
        let head = evaluate(ctx, psi, pos + k)?.value.value();
        let guard = if k == 0 {
            1.0
        } else if almost {
            oracle_almost_always(ctx, phi, pos, k as u32 - 1)?.value()
        } else {
            let mut g = 1.0;
            for h in 0..k {
                g = interp.tnorm(g, evaluate(ctx, phi, pos + h)?.value.value());
            }
            g
        };
        best = best.max(interp.tnorm(head, guard));
    }
    Ok(TruthDegree::new(best).expect("degree"))
}

/// Limit of an unbounded operator on a lasso, by evaluating its bounded
/// counterpart at horizons `prefix + k·loop`: `k = 1, 2, …, n_η + 1`, then
/// doubling up to [`LIMIT_LOOP_BUDGET`].
///
/// Stops when two successive values differ by less than `epsilon` (only once
/// `k > n_η`, so that every drop-j window has seen the loop enough times), or
/// early when a monotone head comes within `epsilon` of its extreme value.
pub fn oracle_limit(
    ctx: &EvalContext<'_>,
    f: &Formula,
    pos: usize,
    epsilon: f64,
) -> Result<TruthDegree, OracleError> {
    let trace = ctx.trace;
    let start = trace.loop_start().ok_or(OracleError::NotALasso)?;
    let prefix = start.saturating_sub(pos);
    let loop_len = trace.loop_len();
    let bounded = |t: u32| -> Result<Formula, OracleError> {
        use Formula::*;
        Ok(match f {
            Eventually(a) => Formula::eventually_b(t, (**a).clone()),
            Always(a) => Formula::always_b(t, (**a).clone()),
            AlmostAlways(a) => Formula::almost_always_b(t, (**a).clone()),
            Until(a, b) => Formula::until_b(t, (**a).clone(), (**b).clone()),
            AlmostUntil(a, b) => Formula::almost_until_b(t, (**a).clone(), (**b).clone()),
            _ => return Err(OracleError::Unsupported("expected F, G, AG, U or AU")),
        })
    };
    let min_loops = ctx.eta.n_eta() + 1;
    let mut previous: Option<f64> = None;
    let mut older = 0.0;
    let mut k = 1;
    while k <= LIMIT_LOOP_BUDGET {
        let t = (prefix + k * loop_len) as u32;
        let v = evaluate(ctx, &bounded(t)?, pos)?.value.value();
        let pinned = match f {
            Formula::Always(_) | Formula::AlmostAlways(_) => v <= epsilon,
            _ => v >= 1.0 - epsilon,
        };
        if pinned {
            return Ok(TruthDegree::new(v).expect("degree"));
        }
        if let Some(p) = previous {
            if k >= min_loops && (v - p).abs() < epsilon {
                return Ok(TruthDegree::new(v).expect("degree"));
            }
        }
        older = previous.unwrap_or(v);
        previous = Some(v);
        k = if k < min_loops { k + 1 } else { 2 * k };
    }
    Err(OracleError::NoConvergence {
        loops: LIMIT_LOOP_BUDGET,
        previous: older,
        last: previous.unwrap_or(0.0),
    })
}

/// Classical LTL evaluation on a crisp trace.
///
/// Almost operators are read as their crisp counterparts (`S` as `X`,
/// `W[t]` as `F[t]`, `AG[t]` and `L[t]` as `G[t]`, `AG` as `G`, `AU[t]` as
/// `U[t]`, `AU` as `U`); the reserved atom `__eta_j` is true iff `j = 0`.
pub fn ltl_evaluate(trace: &Trace, f: &Formula, pos: usize) -> Result<CrispVerdict, OracleError> {
    if !trace.is_lasso() && pos >= trace.len() {
        return Err(EvalError::PositionOutOfRange {
            pos,
            len: trace.len(),
        }
        .into());
    }
    Ltl { trace }.holds(f, pos).map(|value| CrispVerdict { value })
}

struct Ltl<'a> {
    trace: &'a Trace,
}

impl Ltl<'_> {
    fn atom(&self, name: &str, pos: usize) -> Result<bool, OracleError> {
        if let Some(j) = eta_atom_index(name) {
            return Ok(j == 0);
        }
        let state = self.trace.resolve(pos).ok_or(EvalError::HorizonExceedsTrace {
            pos,
            len: self.trace.len(),
        })?;
        let a = self
            .trace
            .atom_index(name)
            .ok_or_else(|| EvalError::UnknownAtom(name.into()))?;
        let v = self.trace.states()[state][a].value();
        if v == 1.0 {
            Ok(true)
        } else if v == 0.0 {
            Ok(false)
        } else {
            Err(OracleError::NotCrisp {
                atom: name.into(),
                pos,
                value: v,
            })
        }
    }

    /// Number of positions after which a lasso suffix repeats.
    fn horizon(&self) -> Result<usize, OracleError> {
        if self.trace.is_lasso() {
            Ok(self.trace.len())
        } else {
            Err(OracleError::NotALasso)
        }
    }

    fn canon(&self, pos: usize) -> usize {
        self.trace.resolve(pos).unwrap_or(pos)
    }

    fn eventually(&self, a: &Formula, i: usize, t: usize) -> Result<bool, OracleError> {
        for d in 0..=t {
            if self.holds(a, i + d)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn always(&self, a: &Formula, i: usize, t: usize) -> Result<bool, OracleError> {
        for d in 0..=t {
            if !self.holds(a, i + d)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn until(&self, a: &Formula, b: &Formula, i: usize, t: usize) -> Result<bool, OracleError> {
        for k in 0..=t {
            if self.holds(b, i + k)? {
                return Ok(true);
            }
            if !self.holds(a, i + k)? {
                return Ok(false);
            }
        }
        Ok(false)
    }

    fn holds(&self, f: &Formula, pos: usize) -> Result<bool, OracleError> {
        use Formula::*;
        let i = self.canon(pos);
        Ok(match f {
            Atom(name) => self.atom(name, i)?,
            Top => true,
            Bot => false,
            Not(a) => !self.holds(a, i)?,
            And(a, b) | WeakAnd(a, b) => self.holds(a, i)? && self.holds(b, i)?,
            Or(a, b) | WeakOr(a, b) => self.holds(a, i)? || self.holds(b, i)?,
            Implies(a, b) => !self.holds(a, i)? || self.holds(b, i)?,
            Next(a) | Soon(a) => self.holds(a, i + 1)?,
            EventuallyB(t, a) | Within(t, a) => self.eventually(a, i, *t as usize)?,
            AlwaysB(t, a) | AlmostAlwaysB(t, a) | Lasts(t, a) => self.always(a, i, *t as usize)?,
            UntilB(t, a, b) | AlmostUntilB(t, a, b) => self.until(a, b, i, *t as usize)?,
            Eventually(a) => self.eventually(a, i, self.horizon()?)?,
            Always(a) | AlmostAlways(a) => self.always(a, i, self.horizon()?)?,
            Until(a, b) | AlmostUntil(a, b) => self.until(a, b, i, self.horizon()?)?,
            Scale(..) => return Err(OracleError::Unsupported("O[j] has no crisp counterpart")),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{almost_always_fast, parse};
    use alloc::vec;
    use Interpretation::*;

    fn table3() -> (Trace, AvoidingFunction) {
        (
            Trace::single("p", &[0.1, 0.2, 1.0, 0.1], None).unwrap(),
            AvoidingFunction::new(vec![1.0, 0.5, 0.3]).unwrap(),
        )
    }

    #[test]
    fn enumeration_on_worked_example() {
        let (trace, eta) = table3();
        let ctx = EvalContext::new(&trace, Zadeh, &eta);
        let p = parse("p").unwrap();
        assert_eq!(oracle_almost_always(&ctx, &p, 0, 1).unwrap().value(), 0.1);
        assert_eq!(oracle_almost_always(&ctx, &p, 0, 2).unwrap().value(), 0.3);
        assert_eq!(oracle_almost_always(&ctx, &p, 0, 3).unwrap().value(), 0.1);
        assert_eq!(oracle_almost_always(&ctx, &p, 1, 0).unwrap().value(), 0.2);
        assert_eq!(
            oracle_almost_always(&ctx, &p, 0, 21),
            Err(OracleError::WindowTooLarge { t: 21, max: 20 })
        );
        for t in 0..=3 {
            assert_eq!(
                oracle_almost_always(&ctx, &p, 0, t).unwrap(),
                almost_always_fast(&ctx, &p, 0, t).unwrap()
            );
        }
    }

    #[test]
    fn until_oracle() {
        let trace = Trace::new(
            vec!["a".into(), "b".into()],
            vec![vec![1.0, 0.0], vec![1.0, 0.4], vec![0.5, 0.9]],
            None,
        )
        .unwrap();
        let eta = AvoidingFunction::new(vec![1.0, 0.5]).unwrap();
        let ctx = EvalContext::new(&trace, Zadeh, &eta);
        assert_eq!(oracle_until(&ctx, &parse("a U[2] b").unwrap(), 0).unwrap().value(), 0.9);
        assert_eq!(oracle_until(&ctx, &parse("a AU[2] b").unwrap(), 0).unwrap().value(), 0.9);
        assert!(oracle_until(&ctx, &parse("F b").unwrap(), 0).is_err());
    }

    #[test]
    fn limit_examples() {
        let eta = AvoidingFunction::new(vec![1.0, 0.5]).unwrap();
        let trace = Trace::single("p", &[0.9, 0.5, 0.7], Some(1)).unwrap();
        let ctx = EvalContext::new(&trace, Zadeh, &eta);
        assert_eq!(oracle_limit(&ctx, &parse("G p").unwrap(), 0, 1e-9).unwrap().value(), 0.5);

        let trace = Trace::single("p", &[0.3], Some(0)).unwrap();
        let ctx = EvalContext::new(&trace, Lukasiewicz, &eta);
        assert_eq!(oracle_limit(&ctx, &parse("F p").unwrap(), 0, 1e-9).unwrap().value(), 1.0);

        let trace = Trace::single("p", &[1.0, 1.0], Some(1)).unwrap();
        let ctx = EvalContext::new(&trace, Product, &eta);
        assert_eq!(oracle_limit(&ctx, &parse("G p").unwrap(), 0, 1e-9).unwrap().value(), 1.0);

        let finite = Trace::single("p", &[1.0], None).unwrap();
        let ctx = EvalContext::new(&finite, Product, &eta);
        assert_eq!(
            oracle_limit(&ctx, &parse("G p").unwrap(), 0, 1e-9),
            Err(OracleError::NotALasso)
        );
    }

    #[test]
    fn ltl_examples() {
        let trace = Trace::single("p", &[1.0, 0.0, 1.0], Some(2)).unwrap();
        let f = parse("F p").unwrap();
        assert!(ltl_evaluate(&trace, &f, 1).unwrap().value);
        assert!(!ltl_evaluate(&trace, &parse("G p").unwrap(), 0).unwrap().value);
        assert!(ltl_evaluate(&trace, &parse("X G p").unwrap(), 1).unwrap().value);
        assert!(ltl_evaluate(&trace, &parse("!p U p").unwrap(), 1).unwrap().value);

        let fuzzy = Trace::single("p", &[0.5], Some(0)).unwrap();
        assert!(matches!(
            ltl_evaluate(&fuzzy, &f, 0),
            Err(OracleError::NotCrisp { .. })
        ));
        let finite = Trace::single("p", &[1.0], None).unwrap();
        assert_eq!(ltl_evaluate(&finite, &f, 0), Err(OracleError::NotALasso));
    }

    #[test]
    fn soon_collapses_to_next_on_crisp_traces() {
        let trace = Trace::single("p", &[0.0, 1.0, 0.0, 1.0], Some(1)).unwrap();
        let eta = AvoidingFunction::crisp();
        for interp in Interpretation::ALL {
            let ctx = EvalContext::new(&trace, interp, &eta);
            for pos in 0..6 {
                let fuzzy = evaluate(&ctx, &parse("S p").unwrap(), pos).unwrap().value.value();
                let crisp = ltl_evaluate(&trace, &parse("X p").unwrap(), pos).unwrap().value;
                assert_eq!(fuzzy, if crisp { 1.0 } else { 0.0 });
            }
        }
    }
}
