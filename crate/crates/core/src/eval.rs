//! Truth-degree evaluation over finite and lasso traces.
//!
//! Every call to [`evaluate`] owns a memo table keyed by (subformula node,
//! canonical position); on lassos positions are first folded into the loop,
//! so nested bounded operators stay polynomial.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::algebra::Interpretation;
use crate::{AvoidingFunction, Formula, Trace, TruthDegree};

/// How bounded windows that run past the end of a finite trace are handled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FinitePolicy {
    /// Fail with [`EvalError::HorizonExceedsTrace`].
    #[default]
    Strict,
    /// Missing states assign 0 to every atom; results are tagged approximate.
    PadZero,
}

/// How a reported value relates to the semantic value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exactness {
    Exact,
    /// The true value is at least the reported one.
    LowerBound,
    /// The true value is at most the reported one.
    UpperBound,
    Approximate,
}

impl Exactness {
    pub fn name(self) -> &'static str {
        match self {
            Exactness::Exact => "exact",
            Exactness::LowerBound => "lower-bound",
            Exactness::UpperBound => "upper-bound",
            Exactness::Approximate => "approximate",
        }
    }

    /// Tag of a value computed monotonically from values tagged `self` and `other`.
    pub fn join(self, other: Exactness) -> Exactness {
        use Exactness::*;
        match (self, other) {
            (Exact, x) | (x, Exact) => x,
            (a, b) if a == b => a,
            _ => Approximate,
        }
    }

    /// Tag after an order-reversing operation.
    pub fn flip(self) -> Exactness {
        match self {
            Exactness::LowerBound => Exactness::UpperBound,
            Exactness::UpperBound => Exactness::LowerBound,
            other => other,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalResult {
    pub value: TruthDegree,
    pub exactness: Exactness,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("position {pos} lies past the end of a finite trace of {len} states")]
    HorizonExceedsTrace { pos: usize, len: usize },
    #[error("start position {pos} is out of range for a finite trace of {len} states")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("O[{j}] needs 1 <= j < n_eta = {n_eta}")]
    ScaleIndexOutOfRange { j: u32, n_eta: usize },
    #[error("trace is not a lasso")]
    NotALasso,
    #[error("`{0}` is not an unbounded temporal operator")]
    NotUnboundedHead(&'static str),
}

/// Everything an evaluation depends on besides the formula and position.
#[derive(Clone, Copy, Debug)]
pub struct EvalContext<'a> {
    pub trace: &'a Trace,
    pub interp: Interpretation,
    pub eta: &'a AvoidingFunction,
    pub finite_policy: FinitePolicy,
}

impl<'a> EvalContext<'a> {
    pub fn new(trace: &'a Trace, interp: Interpretation, eta: &'a AvoidingFunction) -> Self {
        EvalContext {
            trace,
            interp,
            eta,
            finite_policy: FinitePolicy::Strict,
        }
    }

    pub fn with_policy(mut self, policy: FinitePolicy) -> Self {
        self.finite_policy = policy;
        self
    }
}

/// Prefix of the reserved atoms that denote η(j).
pub const ETA_ATOM_PREFIX: &str = "__eta_";

/// `Some(j)` when `name` is the reserved atom `__eta_j`.
pub fn eta_atom_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix(ETA_ATOM_PREFIX)?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

/// Evaluates `f` at position `pos`.
pub fn evaluate(ctx: &EvalContext<'_>, f: &Formula, pos: usize) -> Result<EvalResult, EvalError> {
    check_start(ctx, pos)?;
    let (v, e) = Evaluator::new(ctx).eval(f, pos)?;
    Ok(EvalResult {
        value: TruthDegree::saturating(v),
        exactness: e,
    })
}

/// `AG[t] φ` at `pos` by bounded selection of the smallest window values.
pub fn almost_always_fast(
    ctx: &EvalContext<'_>,
    phi: &Formula,
    pos: usize,
    t: u32,
) -> Result<TruthDegree, EvalError> {
    almost_always_counted(ctx, phi, pos, t).map(|(v, _)| v)
}

/// Like [`almost_always_fast`], also returning the number of value comparisons.
pub fn almost_always_counted(
    ctx: &EvalContext<'_>,
    phi: &Formula,
    pos: usize,
    t: u32,
) -> Result<(TruthDegree, u64), EvalError> {
    check_start(ctx, pos)?;
    let mut ev = Evaluator::new(ctx);
    let mut acc = AlmostAlwaysWindow::new(ctx.interp, ctx.eta.n_eta());
    for d in 0..=t as usize {
        acc.push(ev.eval(phi, pos + d)?.0);
    }
    let v = acc.value(ctx.eta);
    Ok((TruthDegree::saturating(v), acc.comparisons()))
}

/// Drop-the-j-smallest value of a plain window of degrees.
pub fn almost_always_values(interp: Interpretation, eta: &AvoidingFunction, values: &[f64]) -> f64 {
    let mut acc = AlmostAlwaysWindow::new(interp, eta.n_eta());
    for &v in values {
        acc.push(v);
    }
    acc.value(eta)
}

/// Exact value of an `F`, `G`, `AG`, `U` or `AU` headed formula on a lasso.
pub fn eval_unbounded_lasso(
    ctx: &EvalContext<'_>,
    f: &Formula,
    pos: usize,
) -> Result<TruthDegree, EvalError> {
    if !ctx.trace.is_lasso() {
        return Err(EvalError::NotALasso);
    }
    if !f.is_unbounded_head() {
        return Err(EvalError::NotUnboundedHead(f.head_name()));
    }
    let (v, _) = Evaluator::new(ctx).unbounded_lasso(f, pos)?;
    Ok(TruthDegree::saturating(v))
}

fn check_start(ctx: &EvalContext<'_>, pos: usize) -> Result<(), EvalError> {
    let len = ctx.trace.len();
    if !ctx.trace.is_lasso() && pos >= len {
        return Err(EvalError::PositionOutOfRange { pos, len });
    }
    Ok(())
}

type Val = (f64, Exactness);

struct Evaluator<'c, 'a> {
    ctx: &'c EvalContext<'a>,
    memo: BTreeMap<(usize, usize), Val>,
    lookahead: BTreeMap<usize, u64>,
}

impl<'c, 'a> Evaluator<'c, 'a> {
    fn new(ctx: &'c EvalContext<'a>) -> Self {
        Evaluator {
            ctx,
            memo: BTreeMap::new(),
            lookahead: BTreeMap::new(),
        }
    }

    fn interp(&self) -> Interpretation {
        self.ctx.interp
    }

    fn eta(&self) -> &'a AvoidingFunction {
        self.ctx.eta
    }

    fn eval(&mut self, f: &Formula, pos: usize) -> Result<Val, EvalError> {
        let trace = self.ctx.trace;
        let padded = !trace.is_lasso() && pos >= trace.len();
        if padded && self.ctx.finite_policy == FinitePolicy::Strict {
            return Err(EvalError::HorizonExceedsTrace {
                pos,
                len: trace.len(),
            });
        }
        let pad_tag = if padded {
            Exactness::Approximate
        } else {
            Exactness::Exact
        };
        match f {
            Formula::Atom(name) => return self.atom(name, pos, padded).map(|v| (v, pad_tag)),
            Formula::Top => return Ok((1.0, pad_tag)),
            Formula::Bot => return Ok((0.0, pad_tag)),
            _ => {}
        }
        let key = (f as *const Formula as usize, trace.resolve(pos).unwrap_or(pos));
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let (v, e) = self.compute(f, pos)?;
        let out = (v, e.join(pad_tag));
        self.memo.insert(key, out);
        Ok(out)
    }

    fn atom(&self, name: &str, pos: usize, padded: bool) -> Result<f64, EvalError> {
        if let Some(j) = eta_atom_index(name) {
            return Ok(self.eta().weight(j));
        }
        let trace = self.ctx.trace;
        let a = trace
            .atom_index(name)
            .ok_or_else(|| EvalError::UnknownAtom(name.into()))?;
        if padded {
            return Ok(0.0);
        }
        let state = trace.resolve(pos).expect("position checked by caller");
        Ok(trace.value(state, a))
    }

    fn compute(&mut self, f: &Formula, i: usize) -> Result<Val, EvalError> {
        use Formula::*;
        let interp = self.interp();
        Ok(match f {
            Atom(_) | Top | Bot => unreachable!("leaves are handled by eval"),
            Not(a) => {
                let (v, e) = self.eval(a, i)?;
                (interp.neg(v), e.flip())
            }
            And(a, b) => self.binary(a, b, i, |x, y| interp.tnorm(x, y))?,
            Or(a, b) => self.binary(a, b, i, |x, y| interp.tconorm(x, y))?,
            WeakAnd(a, b) => self.binary(a, b, i, |x, y| interp.weak_and(x, y))?,
            WeakOr(a, b) => self.binary(a, b, i, |x, y| interp.weak_or(x, y))?,
            Implies(a, b) => {
                let (va, ea) = self.eval(a, i)?;
                let (vb, eb) = self.eval(b, i)?;
                (interp.implies(va, vb), ea.flip().join(eb))
            }
            Next(a) => self.eval(a, i + 1)?,
            Soon(a) => self.soon(a, i)?,
            EventuallyB(t, a) => self.fold_window(a, i, *t as usize, |x, y| interp.tconorm(x, y))?,
            AlwaysB(t, a) => self.fold_window(a, i, *t as usize, |x, y| interp.tnorm(x, y))?,
            Within(t, a) => {
                let t = *t as usize;
                let eta = self.eta();
                let (mut acc, mut e) = self.fold_window(a, i, t, |x, y| interp.tconorm(x, y))?;
                for m in 1..eta.n_eta() {
                    let (v, em) = self.eval(a, i + t + m)?;
                    acc = interp.tconorm(acc, v * eta.weight(m));
                    e = e.join(em);
                }
                (acc, e)
            }
            Lasts(t, a) => self.lasts(a, i, *t as usize)?,
            AlmostAlwaysB(t, a) => self.almost_always(a, i, *t as usize)?,
            UntilB(t, a, b) => self.until(a, b, i, *t as usize)?,
            AlmostUntilB(t, a, b) => self.almost_until(a, b, i, *t as usize)?,
            Scale(j, a) => {
                let n_eta = self.eta().n_eta();
                if *j < 1 || *j as usize >= n_eta {
                    return Err(EvalError::ScaleIndexOutOfRange { j: *j, n_eta });
                }
                let (v, e) = self.eval(a, i)?;
                (v * self.eta().weight(*j as usize), e)
            }
            Eventually(_) | Always(_) | AlmostAlways(_) | Until(..) | AlmostUntil(..) => {
                if self.ctx.trace.is_lasso() {
                    self.unbounded_lasso(f, i)?
                } else {
                    self.unbounded_finite(f, i)?
                }
            }
        })
    }

    fn binary(
        &mut self,
        a: &Formula,
        b: &Formula,
        i: usize,
        op: impl Fn(f64, f64) -> f64,
    ) -> Result<Val, EvalError> {
        let (va, ea) = self.eval(a, i)?;
        let (vb, eb) = self.eval(b, i)?;
        Ok((op(va, vb), ea.join(eb)))
    }

    fn window(&mut self, a: &Formula, i: usize, t: usize) -> Result<(Vec<f64>, Exactness), EvalError> {
        let mut vals = Vec::with_capacity(t + 1);
        let mut e = Exactness::Exact;
        for d in 0..=t {
            let (v, ed) = self.eval(a, i + d)?;
            vals.push(v);
            e = e.join(ed);
        }
        Ok((vals, e))
    }

    /// `v0 op (v1 op (… op vt))`, so that `F[t] φ = φ | X F[t-1] φ` holds bit for bit.
    fn fold_window(
        &mut self,
        a: &Formula,
        i: usize,
        t: usize,
        op: impl Fn(f64, f64) -> f64,
    ) -> Result<Val, EvalError> {
        let (vals, e) = self.window(a, i, t)?;
        Ok((right_fold(&vals, op), e))
    }

    fn soon(&mut self, a: &Formula, i: usize) -> Result<Val, EvalError> {
        let interp = self.interp();
        let eta = self.eta();
        let mut acc = 0.0;
        let mut e = Exactness::Exact;
        for d in 1..=eta.n_eta() {
            let (v, ed) = self.eval(a, i + d)?;
            let term = v * eta.weight(d - 1);
            acc = if d == 1 { term } else { interp.tconorm(acc, term) };
            e = e.join(ed);
        }
        Ok((acc, e))
    }

    fn lasts(&mut self, a: &Formula, i: usize, t: usize) -> Result<Val, EvalError> {
        let interp = self.interp();
        let eta = self.eta();
        let (vals, e) = self.window(a, i, t)?;
        let mut best: f64 = 0.0;
        for j in 0..=t.min(eta.n_eta() - 1) {
            let g = right_fold(&vals[..=t - j], |x, y| interp.tnorm(x, y));
            best = best.max(g * eta.weight(j));
        }
        Ok((best, e))
    }

    fn almost_always(&mut self, a: &Formula, i: usize, t: usize) -> Result<Val, EvalError> {
        let mut acc = AlmostAlwaysWindow::new(self.interp(), self.eta().n_eta());
        let mut e = Exactness::Exact;
        for d in 0..=t {
            let (v, ed) = self.eval(a, i + d)?;
            acc.push(v);
            e = e.join(ed);
        }
        Ok((acc.value(self.eta()), e))
    }

    fn until(&mut self, a: &Formula, b: &Formula, i: usize, t: usize) -> Result<Val, EvalError> {
        let interp = self.interp();
        let mut best: f64 = 0.0;
        let mut prefix = 1.0;
        let mut e = Exactness::Exact;
        for k in 0..=t {
            let (vb, eb) = self.eval(b, i + k)?;
            best = best.max(interp.tnorm(vb, prefix));
            e = e.join(eb);
            if k < t {
                let (va, ea) = self.eval(a, i + k)?;
                prefix = interp.tnorm(prefix, va);
                e = e.join(ea);
            }
        }
        Ok((best, e))
    }

    fn almost_until(&mut self, a: &Formula, b: &Formula, i: usize, t: usize) -> Result<Val, EvalError> {
        let interp = self.interp();
        let eta = self.eta();
        let mut acc = AlmostAlwaysWindow::new(interp, eta.n_eta());
        let mut best: f64 = 0.0;
        let mut e = Exactness::Exact;
        for k in 0..=t {
            let (vb, eb) = self.eval(b, i + k)?;
            best = best.max(interp.tnorm(vb, acc.value(eta)));
            e = e.join(eb);
            if k < t {
                let (va, ea) = self.eval(a, i + k)?;
                acc.push(va);
                e = e.join(ea);
            }
        }
        Ok((best, e))
    }

    /// Positions past the evaluation point a formula needs, assuming unbounded
    /// operators shrink their own windows.
    fn lookahead(&mut self, f: &Formula) -> u64 {
        use Formula::*;
        let key = f as *const Formula as usize;
        if let Some(&h) = self.lookahead.get(&key) {
            return h;
        }
        let n_eta = self.eta().n_eta() as u64;
        let child = |ev: &mut Self| {
            f.children()
                .into_iter()
                .map(|c| ev.lookahead(c))
                .max()
                .unwrap_or(0)
        };
        let h = match f {
            Atom(_) | Top | Bot => 0,
            Next(_) => 1 + child(self),
            Soon(_) => n_eta + child(self),
            Within(t, _) => *t as u64 + n_eta - 1 + child(self),
            EventuallyB(t, _) | AlwaysB(t, _) | AlmostAlwaysB(t, _) | Lasts(t, _) | UntilB(t, ..)
            | AlmostUntilB(t, ..) => *t as u64 + child(self),
            _ => child(self),
        };
        self.lookahead.insert(key, h);
        h
    }

    fn unbounded_finite(&mut self, f: &Formula, i: usize) -> Result<Val, EvalError> {
        use Formula::*;
        let len = self.ctx.trace.len();
        let need = f
            .children()
            .into_iter()
            .map(|c| self.lookahead(c))
            .max()
            .unwrap_or(0);
        let last = i as u64 + need;
        let (t, tag) = if last < len as u64 {
            (len - 1 - last as usize, None)
        } else if self.ctx.finite_policy == FinitePolicy::Strict {
            return Err(EvalError::HorizonExceedsTrace {
                pos: last as usize,
                len,
            });
        } else {
            (0, Some(Exactness::Approximate))
        };
        let interp = self.interp();
        let (v, e, head) = match f {
            Eventually(a) => {
                let (v, e) = self.fold_window(a, i, t, |x, y| interp.tconorm(x, y))?;
                (v, e, Exactness::LowerBound)
            }
            Always(a) => {
                let (v, e) = self.fold_window(a, i, t, |x, y| interp.tnorm(x, y))?;
                (v, e, Exactness::UpperBound)
            }
            AlmostAlways(a) => {
                let (v, e) = self.almost_always(a, i, t)?;
                (v, e, Exactness::Approximate)
            }
            Until(a, b) => {
                let (v, e) = self.until(a, b, i, t)?;
                (v, e, Exactness::LowerBound)
            }
            AlmostUntil(a, b) => {
                let (v, e) = self.almost_until(a, b, i, t)?;
                (v, e, Exactness::LowerBound)
            }
            _ => unreachable!("bounded head"),
        };
        Ok((v, e.join(tag.unwrap_or(head))))
    }

    /// Child values from `i` onward on a lasso: the prefix positions before
    /// the loop, then one copy of every loop state.
    fn split(&mut self, a: &Formula, i: usize) -> Result<(Vec<f64>, Vec<f64>, Exactness), EvalError> {
        let trace = self.ctx.trace;
        let start = trace.loop_start().expect("lasso");
        let mut e = Exactness::Exact;
        let mut prefix = Vec::new();
        for p in i..start {
            let (v, ep) = self.eval(a, p)?;
            prefix.push(v);
            e = e.join(ep);
        }
        let mut lp = Vec::with_capacity(trace.loop_len());
        for p in start..trace.len() {
            let (v, ep) = self.eval(a, p)?;
            lp.push(v);
            e = e.join(ep);
        }
        Ok((prefix, lp, e))
    }

    fn unbounded_lasso(&mut self, f: &Formula, i: usize) -> Result<Val, EvalError> {
        use Formula::*;
        let interp = self.interp();
        let eta = self.eta();
        let trace = self.ctx.trace;
        let start = trace.loop_start().ok_or(EvalError::NotALasso)?;
        let loop_len = trace.loop_len();
        let prefix_len = start.saturating_sub(i);
        match f {
            Always(a) => {
                let (pre, lp, e) = self.split(a, i)?;
                let v = if interp.is_idempotent() {
                    pre.iter().chain(&lp).fold(1.0, |m: f64, &x| m.min(x))
                } else if lp.iter().all(|&x| x == 1.0) {
                    right_fold_or(&pre, 1.0, |x, y| interp.tnorm(x, y))
                } else {
                    0.0
                };
                Ok((v, e))
            }
            Eventually(a) => {
                let (pre, lp, e) = self.split(a, i)?;
                let v = if interp.is_idempotent() {
                    pre.iter().chain(&lp).fold(0.0, |m: f64, &x| m.max(x))
                } else if lp.iter().all(|&x| x == 0.0) {
                    right_fold_or(&pre, 0.0, |x, y| interp.tconorm(x, y))
                } else {
                    1.0
                };
                Ok((v, e))
            }
            AlmostAlways(a) => {
                let (pre, lp, e) = self.split(a, i)?;
                let v = if interp.is_idempotent() {
                    let loop_min = lp.iter().fold(1.0, |m: f64, &x| m.min(x));
                    let mut below: Vec<f64> = pre.into_iter().filter(|&x| x < loop_min).collect();
                    below.sort_by(f64::total_cmp);
                    (0..eta.n_eta())
                        .map(|j| eta.weight(j) * below.get(j).copied().unwrap_or(loop_min))
                        .fold(0.0, f64::max)
                } else if lp.iter().all(|&x| x == 1.0) {
                    let mut acc = AlmostAlwaysWindow::new(interp, eta.n_eta());
                    for x in pre {
                        acc.push(x);
                    }
                    acc.bound(eta)
                } else {
                    0.0
                };
                Ok((v, e))
            }
            Until(a, b) => {
                // past the first loop every candidate is dominated by one inside it
                let horizon = prefix_len + loop_len;
                let mut best: f64 = 0.0;
                let mut prefix = 1.0;
                let mut e = Exactness::Exact;
                for k in 0..horizon {
                    let (vb, eb) = self.eval(b, i + k)?;
                    best = best.max(interp.tnorm(vb, prefix));
                    let (va, ea) = self.eval(a, i + k)?;
                    prefix = interp.tnorm(prefix, va);
                    e = e.join(eb).join(ea);
                    if prefix <= best {
                        break;
                    }
                }
                Ok((best, e))
            }
            AlmostUntil(a, b) => {
                let horizon = prefix_len.max(eta.n_eta()) + loop_len;
                let mut acc = AlmostAlwaysWindow::new(interp, eta.n_eta());
                let mut best: f64 = 0.0;
                let mut e = Exactness::Exact;
                for k in 0..horizon {
                    let (vb, eb) = self.eval(b, i + k)?;
                    let (ag, bound) = acc.profile(eta);
                    debug_assert!(ag <= bound);
                    best = best.max(interp.tnorm(vb, ag));
                    let (va, ea) = self.eval(a, i + k)?;
                    acc.push(va);
                    e = e.join(eb).join(ea);
                    if acc.bound(eta) <= best {
                        break;
                    }
                }
                Ok((best, e))
            }
            other => Err(EvalError::NotUnboundedHead(other.head_name())),
        }
    }
}

fn right_fold(vals: &[f64], op: impl Fn(f64, f64) -> f64) -> f64 {
    let (&last, rest) = vals.split_last().expect("non-empty window");
    rest.iter().rev().fold(last, |acc, &v| op(v, acc))
}

fn right_fold_or(vals: &[f64], empty: f64, op: impl Fn(f64, f64) -> f64) -> f64 {
    if vals.is_empty() {
        empty
    } else {
        right_fold(vals, op)
    }
}

const SCALE_STEP: i64 = 256;

fn pow2(e: i64) -> f64 {
    debug_assert!((-1022..=1023).contains(&e));
    f64::from_bits(((1023 + e) as u64) << 52)
}

/// Splits a positive finite `x` into `(m, e)` with `x = m · 2^e`, `m ∈ [1, 2)`.
fn frexp(x: f64) -> (f64, i64) {
    debug_assert!(x > 0.0 && x.is_finite());
    let (x, bias) = if x < f64::MIN_POSITIVE {
        (x * pow2(64), -64)
    } else {
        (x, 0)
    };
    let bits = x.to_bits();
    let e = ((bits >> 52) & 0x7ff) as i64 - 1023;
    let m = f64::from_bits((bits & ((1u64 << 52) - 1)) | (1023u64 << 52));
    (m, e + bias)
}

/// `m · 2^e` without intermediate overflow.
fn ldexp(mut m: f64, mut e: i64) -> f64 {
    while e < 0 && m != 0.0 {
        let step = e.max(-SCALE_STEP);
        m *= pow2(step);
        e -= step;
    }
    while e > 0 && m.is_finite() {
        let step = e.min(SCALE_STEP);
        m *= pow2(step);
        e -= step;
    }
    m
}

/// Streaming "almost always" over a window of degrees.
///
/// Keeps the `n_η` smallest values (ties broken by arrival order) in a
/// bounded max-heap plus one interpretation-specific aggregate of the whole
/// window, so that the ⊗-product of the window minus its `j` smallest values
/// is available for every `j < n_η` without revisiting the window.
#[derive(Clone, Debug)]
pub struct AlmostAlwaysWindow {
    interp: Interpretation,
    cap: usize,
    heap: Vec<(f64, u64)>,
    count: u64,
    comparisons: u64,
    // Łukasiewicz
    sum: f64,
    // Product: zero count and the product of nonzero values as mant · 2^exp
    zeros: u64,
    mant: f64,
    exp: i64,
}

impl AlmostAlwaysWindow {
    pub fn new(interp: Interpretation, n_eta: usize) -> Self {
        AlmostAlwaysWindow {
            interp,
            cap: n_eta.max(1),
            heap: Vec::with_capacity(n_eta.max(1)),
            count: 0,
            comparisons: 0,
            sum: 0.0,
            zeros: 0,
            mant: 1.0,
            exp: 0,
        }
    }

    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Value comparisons performed so far.
    pub fn comparisons(&self) -> u64 {
        self.comparisons
    }

    fn greater(&mut self, a: (f64, u64), b: (f64, u64)) -> bool {
        self.comparisons += 1;
        a.0 > b.0 || (a.0 == b.0 && a.1 > b.1)
    }

    pub fn push(&mut self, v: f64) {
        let item = (v, self.count);
        self.count += 1;
        match self.interp {
            Interpretation::Lukasiewicz => self.sum += v,
            Interpretation::Product => {
                if v == 0.0 {
                    self.zeros += 1;
                } else {
                    let (vm, ve) = frexp(v);
                    let (m, e) = frexp(self.mant * vm);
                    self.mant = m;
                    self.exp += e + ve;
                }
            }
            Interpretation::Zadeh | Interpretation::Godel => {}
        }
        if self.heap.len() < self.cap {
            self.heap.push(item);
            self.sift_up(self.heap.len() - 1);
        } else if self.greater(self.heap[0], item) {
            self.heap[0] = item;
            self.sift_down(0);
        }
    }

    fn sift_up(&mut self, mut i: usize) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if !self.greater(self.heap[i], self.heap[parent]) {
                break;
            }
            self.heap.swap(i, parent);
            i = parent;
        }
    }

    fn sift_down(&mut self, mut i: usize) {
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let mut big = l;
            if r < n && self.greater(self.heap[r], self.heap[l]) {
                big = r;
            }
            if !self.greater(self.heap[big], self.heap[i]) {
                break;
            }
            self.heap.swap(i, big);
            i = big;
        }
    }

    /// `max_{j ≤ min(len−1, n_η−1)} η(j) · ⊗(window minus its j smallest)`;
    /// 1 for an empty window.
    pub fn value(&mut self, eta: &AvoidingFunction) -> f64 {
        self.profile(eta).0
    }

    /// Upper bound on [`value`](Self::value) after any further pushes: the
    /// same maximum over every `j < n_η`, an empty remainder counting as 1.
    pub fn bound(&mut self, eta: &AvoidingFunction) -> f64 {
        self.profile(eta).1
    }

    fn profile(&mut self, eta: &AvoidingFunction) -> (f64, f64) {
        if self.count == 0 {
            return (1.0, 1.0);
        }
        let mut sorted = self.heap.clone();
        let mut cmps = 0u64;
        sorted.sort_by(|a, b| {
            cmps += 1;
            a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
        });
        self.comparisons += cmps;

        let n_eta = eta.n_eta();
        let jmax = (self.count as usize - 1).min(n_eta - 1).min(sorted.len() - 1);
        let mut value: f64 = 0.0;
        let mut dropped_sum = 0.0;
        // Product: nonzero dropped values divided out of mant · 2^exp
        let mut q = self.mant;
        let mut qe = self.exp;
        for j in 0..=jmax {
            if j > 0 {
                let gone = sorted[j - 1].0;
                dropped_sum += gone;
                if gone != 0.0 {
                    let (gm, ge) = frexp(gone);
                    let (m, e) = frexp(q / gm);
                    q = m;
                    qe += e - ge;
                }
            }
            let g = match self.interp {
                Interpretation::Zadeh | Interpretation::Godel => sorted[j].0,
                Interpretation::Lukasiewicz => {
                    let kept = (self.count as usize - j - 1) as f64;
                    ((self.sum - dropped_sum) - kept).max(0.0)
                }
                Interpretation::Product => {
                    if self.zeros as usize > j {
                        0.0
                    } else {
                        ldexp(q, qe)
                    }
                }
            };
            value = value.max(eta.weight(j) * g);
        }
        let mut bound = value;
        if (self.count as usize) < n_eta {
            bound = bound.max(eta.weight(self.count as usize));
        }
        (value, bound)
    }
}
