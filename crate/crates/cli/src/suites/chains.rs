//! Operator inequalities, unfoldings and recursions of the evaluator.
//!
//! On finite traces a law instance is checked only where all of its terms
//! are defined (bounded windows inside the trace); laws with unbounded
//! terms are checked on lassos only.

use std::cell::RefCell;

use ftl_core::{evaluate, format, EvalContext, EvalError, Formula, Interpretation, Trace};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{run_cases, Scene, SuiteReport, Tally, TOL};
use crate::gen::{self, FormulaGen, Shape, Values, ATOMS};

pub fn run(seed: u64, cases: u64) -> SuiteReport {
    run_cases(seed, cases, case).into_report("chains")
}

/// Values of formulas at one position; remembers the first unexpected error.
struct At<'a> {
    ctx: EvalContext<'a>,
    pos: usize,
    error: RefCell<Option<EvalError>>,
}

impl At<'_> {
    fn v(&self, f: &Formula) -> Option<f64> {
        match evaluate(&self.ctx, f, self.pos) {
            Ok(r) => Some(r.value.value()),
            Err(EvalError::HorizonExceedsTrace { .. }) => None,
            Err(e) => {
                self.error.borrow_mut().get_or_insert(e);
                None
            }
        }
    }

    fn term<'f>(&self, f: &'f Formula) -> Term<'f> {
        (f, self.v(f))
    }

    /// Unbounded operators only have exact values on lassos.
    fn lasso_term<'f>(&self, f: &'f Formula) -> Term<'f> {
        (f, if self.ctx.trace.is_lasso() { self.v(f) } else { None })
    }
}

struct Check<'a, 't> {
    tally: &'t mut Tally,
    scene: Scene<'a>,
    pos: usize,
}

type Term<'f> = (&'f Formula, Option<f64>);

impl Check<'_, '_> {
    fn le(&mut self, law: &str, a: Term<'_>, b: Term<'_>) {
        if let (Some(x), Some(y)) = (a.1, b.1) {
            let (scene, pos) = (self.scene, self.pos);
            self.tally.record(law, x <= y + TOL, || {
                scene.cx(pos, format!("{} <= {}", format(a.0), format(b.0)), x, y, "")
            });
        }
    }

    fn eq(&mut self, law: &str, a: Term<'_>, b: Term<'_>, tol: f64) {
        if let (Some(x), Some(y)) = (a.1, b.1) {
            let (scene, pos) = (self.scene, self.pos);
            self.tally.record(law, (x - y).abs() <= tol, || {
                scene.cx(pos, format!("{} = {}", format(a.0), format(b.0)), x, y, "")
            });
        }
    }

    fn holds(&mut self, law: &str, ok: bool, what: &Formula, lhs: f64, rhs: f64, note: &str) {
        let (scene, pos) = (self.scene, self.pos);
        self.tally.record(law, ok, || scene.cx(pos, format(what), lhs, rhs, note));
    }
}

struct Family {
    phi: Formula,
    x: Formula,
    soon: Formula,
    f0: Formula,
    ft: Formula,
    ft2: Formula,
    f: Formula,
    g: Formula,
    g1: Formula,
    and_next: Formula,
    gt: Formula,
    gt2: Formula,
    wt: Formula,
    ft_n: Formula,
    f_any: Formula,
    w_any: Formula,
    agt: Formula,
    ag: Formula,
    lt: Formula,
    lt_next: Formula,
    u0: Formula,
    ut: Formula,
    u: Formula,
    f_psi: Formula,
    psi: Formula,
    aut: Formula,
    au: Formula,
    ft_unfold: Formula,
    gt_unfold: Formula,
    ut_prev: Formula,
    ut_last: Formula,
    aut_prev: Formula,
    aut_last: Formula,
}

impl Family {
    fn new(phi: Formula, psi: Formula, t: u32, t2: u32, t3: u32, n_eta: usize) -> Self {
        let p = || phi.clone();
        let q = || psi.clone();
        Family {
            x: Formula::next(p()),
            soon: Formula::soon(p()),
            f0: Formula::eventually_b(0, p()),
            ft: Formula::eventually_b(t, p()),
            ft2: Formula::eventually_b(t2, p()),
            f: Formula::eventually(p()),
            g: Formula::always(p()),
            g1: Formula::always_b(1, p()),
            and_next: Formula::and(p(), Formula::next(p())),
            gt: Formula::always_b(t, p()),
            gt2: Formula::always_b(t2, p()),
            wt: Formula::within(t, p()),
            ft_n: Formula::eventually_b(t + n_eta as u32, p()),
            f_any: Formula::eventually_b(t3, p()),
            w_any: Formula::within(t3, p()),
            agt: Formula::almost_always_b(t, p()),
            ag: Formula::almost_always(p()),
            lt: Formula::lasts(t, p()),
            lt_next: Formula::lasts(t + 1, p()),
            u0: Formula::until_b(0, p(), q()),
            ut: Formula::until_b(t, p(), q()),
            u: Formula::until(p(), q()),
            f_psi: Formula::eventually(q()),
            aut: Formula::almost_until_b(t, p(), q()),
            au: Formula::almost_until(p(), q()),
            ft_unfold: Formula::or(p(), Formula::next(Formula::eventually_b(t - 1, p()))),
            gt_unfold: Formula::and(p(), Formula::next(Formula::always_b(t - 1, p()))),
            ut_prev: Formula::until_b(t - 1, p(), q()),
            ut_last: Formula::and(Formula::always_b(t - 1, p()), Formula::next_n(t as usize, q())),
            aut_prev: Formula::almost_until_b(t - 1, p(), q()),
            aut_last: Formula::and(Formula::almost_always_b(t - 1, p()), Formula::next_n(t as usize, q())),
            phi,
            psi,
        }
    }
}

fn case(idx: u64, rng: &mut ChaCha8Rng, tally: &mut Tally) {
    let lasso = idx.is_multiple_of(2);
    let len = rng.random_range(1..=30);
    let shape = if lasso { Shape::Lasso } else { Shape::Finite };
    let trace = gen::trace(rng, &ATOMS, len, shape, Values::Uniform);
    let eta = gen::eta(rng, 5);
    let fg = FormulaGen {
        max_bound: 2,
        unbounded: lasso,
        ..FormulaGen::new(&ATOMS)
    };
    let phi = fg.formula(rng, 2);
    let psi = fg.formula(rng, 2);
    let t = rng.random_range(1..=5);
    let t2 = rng.random_range(t..=7);
    let t3 = rng.random_range(0..=7);
    let fam = Family::new(phi, psi, t, t2, t3, eta.n_eta());

    for interp in Interpretation::ALL {
        let ctx = EvalContext::new(&trace, interp, &eta);
        let scene = Scene {
            case: idx,
            trace: &trace,
            eta: &eta,
            interp,
        };
        for pos in 0..len {
            let at = At {
                ctx,
                pos,
                error: RefCell::new(None),
            };
            let mut c = Check { tally, scene, pos };
            position(&mut c, &at, &fam, &trace, interp);
            let err = at.error.borrow().clone();
            c.tally.record("evaluates", err.is_none(), || {
                scene.cx(pos, format(&fam.phi), 0.0, 0.0, &err.map(|e| e.to_string()).unwrap_or_default())
            });
        }
    }
}

fn position(c: &mut Check<'_, '_>, at: &At<'_>, fam: &Family, trace: &Trace, interp: Interpretation) {
    let lasso = trace.is_lasso();
    let n_eta = at.ctx.eta.n_eta();
    let val = |f: &Formula| at.v(f);

    c.le("next-below-soon", at.term(&fam.x), at.term(&fam.soon));

    c.eq("eventually-chain", at.term(&fam.phi), at.term(&fam.f0), 0.0);
    c.le("eventually-chain", at.term(&fam.f0), at.term(&fam.ft));
    c.le("eventually-chain", at.term(&fam.ft), at.term(&fam.ft2));
    c.le("eventually-chain", at.term(&fam.ft2), at.lasso_term(&fam.f));

    c.le("always-chain", at.lasso_term(&fam.g), at.term(&fam.gt2));
    c.le("always-chain", at.term(&fam.gt2), at.term(&fam.gt));
    c.le("always-chain", at.term(&fam.gt), at.term(&fam.g1));
    c.eq("always-chain", at.term(&fam.g1), at.term(&fam.and_next), 0.0);
    c.le("always-chain", at.term(&fam.g1), at.term(&fam.phi));

    c.le("within-squeeze", at.term(&fam.ft), at.term(&fam.wt));
    c.le("within-squeeze", at.term(&fam.wt), at.term(&fam.ft_n));

    c.le("always-below-eventually", at.term(&fam.gt), at.term(&fam.f_any));
    c.le("always-below-eventually", at.term(&fam.gt), at.term(&fam.w_any));

    c.le("almost-always-above-always", at.term(&fam.gt), at.term(&fam.agt));
    c.le("almost-always-above-always", at.lasso_term(&fam.g), at.lasso_term(&fam.ag));

    c.le("lasts-sandwich", at.term(&fam.gt), at.term(&fam.lt));
    c.le("lasts-sandwich", at.term(&fam.lt), at.term(&fam.agt));
    c.le("lasts-non-increasing", at.term(&fam.lt_next), at.term(&fam.lt));

    c.eq("until-chain", at.term(&fam.psi), at.term(&fam.u0), 0.0);
    c.le("until-chain", at.term(&fam.u0), at.term(&fam.ut));
    c.le("until-chain", at.term(&fam.ut), at.lasso_term(&fam.u));
    c.le("until-chain", at.lasso_term(&fam.u), at.lasso_term(&fam.f_psi));

    c.le("almost-until-chain", at.term(&fam.ut), at.term(&fam.aut));
    c.le("almost-until-chain", at.term(&fam.aut), at.lasso_term(&fam.au));

    c.eq("unfold-eventually", at.term(&fam.ft), at.term(&fam.ft_unfold), 0.0);
    c.eq("unfold-always", at.term(&fam.gt), at.term(&fam.gt_unfold), 0.0);

    for (law, whole, prev, last) in [
        ("until-recursion", &fam.ut, &fam.ut_prev, &fam.ut_last),
        ("almost-until-recursion", &fam.aut, &fam.aut_prev, &fam.aut_last),
    ] {
        if let (Some(w), Some(a), Some(b)) = (val(whole), val(prev), val(last)) {
            let m = a.max(b);
            c.holds(law, (w - m).abs() <= TOL, whole, w, m, "max of shorter horizon and last term");
        }
    }

    if !lasso {
        return;
    }
    let loop_start = trace.loop_start().expect("lasso");
    let loop_len = trace.loop_len();
    let pos = at.pos;
    let span = loop_start.max(pos) + loop_len - pos;
    let from_pos: Vec<f64> = (0..span)
        .filter_map(|d| evaluate(&at.ctx, &fam.phi, pos + d).ok().map(|r| r.value.value()))
        .collect();
    let (Some(g), Some(f)) = (val(&fam.g), val(&fam.f)) else {
        return;
    };

    let horizon = (loop_start.saturating_sub(pos) + (3 + n_eta) * loop_len) as u32;
    let l_far = Formula::lasts(horizon, fam.phi.clone());
    if let Some(l) = val(&l_far) {
        if interp.is_idempotent() {
            c.holds("lasts-limit", (l - g).abs() <= 1e-9, &l_far, l, g, "L at a far horizon vs G");
        } else {
            let in_loop = &from_pos[span - loop_len..];
            let expected = if in_loop.iter().all(|&v| v == 1.0) {
                from_pos[..span - loop_len].iter().fold(1.0, |acc, &v| interp.tnorm(acc, v))
            } else {
                0.0
            };
            c.holds("lasts-limit", (g - expected).abs() <= TOL, &fam.g, g, expected, "closed-form G on a lasso");
            c.holds("lasts-limit", l + TOL >= g, &l_far, l, g, "L at a far horizon stays above G");
        }
    }

    if interp.is_idempotent() {
        let constant = from_pos.iter().all(|&v| v == from_pos[0]);
        c.holds("eventually-equals-always-iff-constant", (f == g) == constant, &fam.f, f, g, if constant {
            "constant from here on"
        } else {
            "not constant from here on"
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let r = run(11, 40);
        assert!(r.passed(), "{r}");
    }
}
