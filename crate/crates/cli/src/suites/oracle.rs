//! The evaluator against the brute-force oracles.

use ftl_core::oracle::{oracle_almost_always, oracle_limit, oracle_until};
use ftl_core::{
    almost_always_fast, eval_unbounded_lasso, evaluate, format, AvoidingFunction, EvalContext,
    Formula, Interpretation, Trace,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{run_cases, Scene, SuiteReport, Tally, TOL};
use crate::gen::{self, FormulaGen, Shape, Values, ATOMS};

/// Convergence threshold handed to `oracle_limit`.
pub const LIMIT_EPSILON: f64 = 1e-9;
/// Agreement required between `eval_unbounded_lasso` and `oracle_limit`.
pub const LIMIT_TOL: f64 = 1e-6;

pub fn run(seed: u64, cases: u64) -> SuiteReport {
    run_cases(seed, cases, case).into_report("oracle")
}

fn scene<'a>(case: u64, trace: &'a Trace, eta: &'a AvoidingFunction, interp: Interpretation) -> Scene<'a> {
    Scene {
        case,
        trace,
        eta,
        interp,
    }
}

fn case(idx: u64, rng: &mut ChaCha8Rng, t: &mut Tally) {
    almost_always_grid(idx, rng, t);
    almost_always_continuous(idx, rng, t);
    until(idx, rng, t);
    lasso_limits(idx, rng, t);
    eventually_vs_always(idx, rng, t);
}

/// Bit-for-bit comparison on multiples of 1/16.
fn almost_always_grid(idx: u64, rng: &mut ChaCha8Rng, t: &mut Tally) {
    let shape = if idx.is_multiple_of(2) { Shape::Lasso } else { Shape::Finite };
    let len = rng.random_range(1..=13);
    let trace = gen::trace(rng, &["p"], len, shape, Values::Grid(16));
    let eta = gen::eta(rng, 4);
    let phi = Formula::atom("p");
    for interp in Interpretation::ALL {
        let ctx = EvalContext::new(&trace, interp, &eta);
        let sc = scene(idx, &trace, &eta, interp);
        for pos in 0..len {
            let max_t = if trace.is_lasso() { 12 } else { len - 1 - pos };
            let w = rng.random_range(0..=max_t) as u32;
            let fast = almost_always_fast(&ctx, &phi, pos, w).map(|d| d.value());
            let slow = oracle_almost_always(&ctx, &phi, pos, w).map(|d| d.value());
            let f = Formula::almost_always_b(w, phi.clone());
            match (fast, slow) {
                (Ok(a), Ok(b)) => t.record("almost-always-exact", a == b, || sc.cx(pos, format(&f), a, b, "fast vs enumeration")),
                (a, b) => t.record("almost-always-exact", false, || {
                    sc.cx(pos, format(&f), f64::NAN, f64::NAN, &format!("{a:?} / {b:?}"))
                }),
            }
        }
    }
}

fn almost_always_continuous(idx: u64, rng: &mut ChaCha8Rng, t: &mut Tally) {
    let len = rng.random_range(1..=13);
    let trace = gen::trace(rng, &ATOMS, len, Shape::Lasso, Values::Uniform);
    let eta = gen::eta(rng, 4);
    let fg = FormulaGen {
        max_bound: 2,
        ..FormulaGen::new(&ATOMS)
    };
    let phi = fg.formula(rng, 2);
    for interp in Interpretation::ALL {
        let ctx = EvalContext::new(&trace, interp, &eta);
        let sc = scene(idx, &trace, &eta, interp);
        for pos in 0..len {
            let w = rng.random_range(0..=12);
            let f = Formula::almost_always_b(w, phi.clone());
            let fast = almost_always_fast(&ctx, &phi, pos, w).map(|d| d.value());
            let slow = oracle_almost_always(&ctx, &phi, pos, w).map(|d| d.value());
            let ok = matches!((&fast, &slow), (Ok(a), Ok(b)) if (a - b).abs() <= TOL);
            t.record("almost-always-tolerance", ok, || {
                sc.cx(pos, format(&f), fast.clone().unwrap_or(f64::NAN), slow.clone().unwrap_or(f64::NAN), "fast vs enumeration")
            });
        }
    }
}

fn until(idx: u64, rng: &mut ChaCha8Rng, t: &mut Tally) {
    let len = rng.random_range(1..=13);
    let trace = gen::trace(rng, &ATOMS, len, Shape::Lasso, Values::Uniform);
    let eta = gen::eta(rng, 4);
    let fg = FormulaGen {
        max_bound: 2,
        ..FormulaGen::new(&ATOMS)
    };
    let (phi, psi) = (fg.formula(rng, 2), fg.formula(rng, 2));
    for interp in Interpretation::ALL {
        let ctx = EvalContext::new(&trace, interp, &eta);
        let sc = scene(idx, &trace, &eta, interp);
        for pos in 0..len {
            let w = rng.random_range(0..=8);
            for (law, f) in [
                ("until-max-formula", Formula::until_b(w, phi.clone(), psi.clone())),
                ("almost-until-max-formula", Formula::almost_until_b(w, phi.clone(), psi.clone())),
            ] {
                let a = evaluate(&ctx, &f, pos).map(|r| r.value.value());
                let b = oracle_until(&ctx, &f, pos).map(|d| d.value());
                let ok = matches!((&a, &b), (Ok(a), Ok(b)) if (a - b).abs() <= TOL);
                t.record(law, ok, || {
                    sc.cx(pos, format(&f), a.clone().unwrap_or(f64::NAN), b.unwrap_or(f64::NAN), "evaluate vs oracle")
                });
            }
        }
    }
}

/// `F`, `G`, `AG`, `U` and `AU` heads over `φ`, `ψ`.
pub fn unbounded_heads(phi: &Formula, psi: &Formula) -> [Formula; 5] {
    [
        Formula::eventually(phi.clone()),
        Formula::always(phi.clone()),
        Formula::almost_always(phi.clone()),
        Formula::until(phi.clone(), psi.clone()),
        Formula::almost_until(phi.clone(), psi.clone()),
    ]
}

/// Closed-form lasso limits against growing horizons, on 0.05-grid values.
fn lasso_limits(idx: u64, rng: &mut ChaCha8Rng, t: &mut Tally) {
    let len = rng.random_range(1..=12);
    let trace = gen::trace(rng, &ATOMS, len, Shape::Lasso, Values::Grid(20));
    let eta = gen::eta(rng, 4);
    let fg = FormulaGen {
        temporal: false,
        weak: false,
        ..FormulaGen::new(&ATOMS)
    };
    let (phi, psi) = (fg.formula(rng, 1), fg.formula(rng, 1));
    let positions = [0, rng.random_range(0..len)];
    for interp in Interpretation::ALL {
        let ctx = EvalContext::new(&trace, interp, &eta);
        let sc = scene(idx, &trace, &eta, interp);
        for f in unbounded_heads(&phi, &psi) {
            for pos in positions {
                let a = eval_unbounded_lasso(&ctx, &f, pos).map(|d| d.value());
                let b = oracle_limit(&ctx, &f, pos, LIMIT_EPSILON);
                let ok = matches!((&a, &b), (Ok(a), Ok(b)) if (a - b.value()).abs() <= LIMIT_TOL);
                t.record("lasso-limit", ok, || {
                    let note = match &b {
                        Ok(_) => String::from("closed form vs growing horizons"),
                        Err(e) => e.to_string(),
                    };
                    sc.cx(pos, format(&f), a.clone().unwrap_or(f64::NAN), b.map(|d| d.value()).unwrap_or(f64::NAN), &note)
                });
            }
        }
    }
}

fn eventually_vs_always(idx: u64, rng: &mut ChaCha8Rng, t: &mut Tally) {
    let p = Formula::atom("p");
    let (f, g) = (Formula::eventually(p.clone()), Formula::always(p.clone()));
    let eta = gen::eta(rng, 4);

    let len = rng.random_range(1..=12);
    let constant = gen::constant_lasso(rng, &["p"], len, Values::Uniform);
    let varying = loop {
        let len = rng.random_range(2..=12);
        let tr = gen::trace(rng, &["p"], len, Shape::Lasso, Values::Uniform);
        let first = tr.states()[0][0];
        if tr.states().iter().any(|s| s[0] != first) {
            break tr;
        }
    };

    for interp in [Interpretation::Zadeh, Interpretation::Godel] {
        for (trace, law, flat) in [
            (&constant, "constant-lasso-F-equals-G", true),
            (&varying, "varying-lasso-F-above-G", false),
        ] {
            let ctx = EvalContext::new(trace, interp, &eta);
            let sc = scene(idx, trace, &eta, interp);
            let fv = eval_unbounded_lasso(&ctx, &f, 0).map(|d| d.value()).unwrap_or(f64::NAN);
            let gv = eval_unbounded_lasso(&ctx, &g, 0).map(|d| d.value()).unwrap_or(f64::NAN);
            let ok = if flat { fv == gv } else { fv > gv };
            t.record(law, ok, || sc.cx(0, String::from("F p vs G p"), fv, gv, ""));
        }
    }
}
