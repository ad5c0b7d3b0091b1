//! Crisp traces: FTL against classical LTL.

use ftl_core::oracle::ltl_evaluate;
use ftl_core::{evaluate, format, AvoidingFunction, EvalContext, Formula, Interpretation};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{run_cases, Scene, SuiteReport, Tally};
use crate::gen::{self, FormulaGen, Shape, Values, ATOMS};

pub fn run(seed: u64, cases: u64) -> SuiteReport {
    run_cases(seed, cases, case).into_report("crisp")
}

/// Replaces every almost operator by its crisp counterpart: `S` by `X`,
/// `W[t]` by `F[t]`, `AG[t]` and `L[t]` by `G[t]`, `AG` by `G`, `AU[t]` by
/// `U[t]` and `AU` by `U`.
pub fn collapse(f: &Formula) -> Formula {
    use Formula::*;
    let c = |a: &Formula| collapse(a);
    match f {
        Atom(_) | Top | Bot => f.clone(),
        Not(a) => Formula::not(c(a)),
        And(a, b) => Formula::and(c(a), c(b)),
        Or(a, b) => Formula::or(c(a), c(b)),
        Implies(a, b) => Formula::implies(c(a), c(b)),
        WeakAnd(a, b) => Formula::weak_and(c(a), c(b)),
        WeakOr(a, b) => Formula::weak_or(c(a), c(b)),
        Next(a) | Soon(a) => Formula::next(c(a)),
        Eventually(a) => Formula::eventually(c(a)),
        EventuallyB(t, a) | Within(t, a) => Formula::eventually_b(*t, c(a)),
        Always(a) | AlmostAlways(a) => Formula::always(c(a)),
        AlwaysB(t, a) | AlmostAlwaysB(t, a) | Lasts(t, a) => Formula::always_b(*t, c(a)),
        Until(a, b) | AlmostUntil(a, b) => Formula::until(c(a), c(b)),
        UntilB(t, a, b) | AlmostUntilB(t, a, b) => Formula::until_b(*t, c(a), c(b)),
        Scale(j, a) => Formula::scale(*j, c(a)),
    }
}

fn case(idx: u64, rng: &mut ChaCha8Rng, t: &mut Tally) {
    let len = rng.random_range(1..=10);
    let trace = gen::trace(rng, &ATOMS, len, Shape::Lasso, Values::Crisp);

    let crisp_eta = AvoidingFunction::crisp();
    let every_op = FormulaGen {
        unbounded: true,
        ..FormulaGen::new(&ATOMS)
    };
    let f = every_op.formula(rng, 3);
    let collapsed = collapse(&f);

    let eta = gen::eta(rng, 5);
    let classical = FormulaGen {
        unbounded: true,
        ..FormulaGen::classical(&ATOMS)
    };
    let g = classical.rooted(rng, 3);

    for interp in Interpretation::ALL {
        let ctx = EvalContext::new(&trace, interp, &crisp_eta);
        let sc = Scene {
            case: idx,
            trace: &trace,
            eta: &crisp_eta,
            interp,
        };
        for pos in 0..len {
            let v = evaluate(&ctx, &f, pos).map(|r| r.value.value());
            let w = evaluate(&ctx, &collapsed, pos).map(|r| r.value.value());
            let ltl = ltl_evaluate(&trace, &f, pos).map(|r| r.value);
            let (v, w) = match (v, w) {
                (Ok(v), Ok(w)) => (v, w),
                (v, w) => {
                    t.record("crisp-values", false, || sc.cx(pos, format(&f), f64::NAN, f64::NAN, &format!("{v:?} / {w:?}")));
                    continue;
                }
            };
            t.record("crisp-values", v == 0.0 || v == 1.0, || sc.cx(pos, format(&f), v, v, "value is not crisp"));
            t.record("collapse", v == w, || sc.cx(pos, format!("{} vs {}", format(&f), format(&collapsed)), v, w, ""));
            let ok = matches!(ltl, Ok(b) if b == (v == 1.0));
            t.record("ltl-agreement", ok, || sc.cx(pos, format(&f), v, f64::NAN, &format!("classical verdict {ltl:?}")));
        }

        if matches!(interp, Interpretation::Zadeh | Interpretation::Lukasiewicz) {
            let ctx = EvalContext::new(&trace, interp, &eta);
            let sc = Scene { eta: &eta, ..sc };
            for pos in 0..len {
                let v = evaluate(&ctx, &g, pos).map(|r| r.value.value());
                let ltl = ltl_evaluate(&trace, &g, pos).map(|r| r.value);
                let ok = match (&v, &ltl) {
                    (Ok(v), Ok(b)) => (*v == 0.0 || *v == 1.0) && *b == (*v == 1.0),
                    _ => false,
                };
                t.record("classical-operators-stay-crisp", ok, || {
                    sc.cx(pos, format(&g), v.clone().unwrap_or(f64::NAN), f64::NAN, &format!("classical verdict {ltl:?}"))
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collapse_examples() {
        let f = ftl_core::parse("S p | W[2] q & (p AU[1] AG q) -> L[3] p").unwrap();
        assert_eq!(format(&collapse(&f)), "X p | F[2] q & p U[1] G q -> G[3] p");
    }

    #[test]
    fn small_run_passes() {
        let r = run(3, 60);
        assert!(r.passed(), "{r}");
    }
}
