//! Soundness of the rewrite rules and of adequate-set lowering.

use ftl_core::rewrite::{is_adequate, lower_to_adequate, rules, LowerError, RewriteRule, RuleEnv};
use ftl_core::{evaluate, format, parse, AvoidingFunction, EvalContext, Formula, Interpretation, Trace};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{run_cases, Counterexample, Scene, SuiteReport, Tally, TOL};
use crate::gen::{self, FormulaGen, Shape, Values, ATOMS};
use crate::DEFAULT_BUDGET;

/// Formulas that lower into the Zadeh and Gödel adequate sets for `n_η = 3`.
pub const CORPUS: [&str; 20] = [
    "p",
    "!p",
    "p | q",
    "p -> q",
    "p && q",
    "p || q",
    "X (p & !q)",
    "F p",
    "S p",
    "W[2] p",
    "F[3] (p | q)",
    "G[2] (p -> q)",
    "L[2] p",
    "AG[2] p",
    "p U[2] q",
    "p AU[2] q",
    "O[1] p | O[2] q",
    "(p U q) -> F q",
    "p -> W[1] q",
    "!(p AU q) | AG[1] (p || S q)",
];

pub const CORPUS_N_ETA: usize = 3;

/// Budget of the random-formula lowering law.
const RANDOM_BUDGET: usize = 5_000;

pub fn run(seed: u64, cases: u64) -> SuiteReport {
    let lowered = lower_corpus();
    let mut tally = run_cases(seed, cases, |idx, rng, t| {
        for rule in rules() {
            rule_sample(idx, rng, t, rule);
        }
        corpus_values(idx, rng, t, &lowered);
        random_lowering(idx, rng, t);
    });
    fixed_checks(&mut tally, &lowered);
    tally.into_report("rewrites")
}

fn plain_cx(formula: String, lhs: f64, rhs: f64, note: String) -> Counterexample {
    Counterexample {
        case: 0,
        interp: None,
        pos: None,
        trace: None,
        eta: None,
        formula,
        lhs,
        rhs,
        note,
    }
}

type Lowered = Vec<(Interpretation, Formula, Result<Formula, LowerError>)>;

fn lower_corpus() -> Lowered {
    let mut out = Vec::new();
    for interp in [Interpretation::Zadeh, Interpretation::Godel] {
        for text in CORPUS {
            let f = parse(text).expect("corpus parses");
            let g = lower_to_adequate(&f, interp, CORPUS_N_ETA, DEFAULT_BUDGET);
            out.push((interp, f, g));
        }
    }
    out
}

fn value(ctx: &EvalContext<'_>, f: &Formula, pos: usize) -> f64 {
    evaluate(ctx, f, pos).map(|r| r.value.value()).unwrap_or(f64::NAN)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL
}

fn random_lasso(rng: &mut ChaCha8Rng) -> Trace {
    let len = rng.random_range(1..=8);
    gen::trace(rng, &ATOMS, len, Shape::Lasso, Values::Uniform)
}

/// A random root matching `rule` together with an η it matches under.
fn sample_root(rng: &mut ChaCha8Rng, rule: &RewriteRule) -> Option<(Formula, AvoidingFunction, Formula)> {
    for _ in 0..20_000 {
        let eta = gen::eta(rng, 4);
        let fg = FormulaGen {
            unbounded: true,
            scale_below: eta.n_eta(),
            ..FormulaGen::new(&ATOMS)
        };
        let f = fg.rooted(rng, 2);
        if let Some(g) = rule.apply_root(&f, &RuleEnv { n_eta: eta.n_eta() }) {
            return Some((f, eta, g));
        }
    }
    None
}

fn rule_sample(idx: u64, rng: &mut ChaCha8Rng, t: &mut Tally, rule: &RewriteRule) {
    let law = format!("rule:{}", rule.name);
    let Some((before, eta, after)) = sample_root(rng, rule) else {
        t.record(&law, false, || plain_cx(String::new(), 0.0, 0.0, String::from("no matching sample found")));
        return;
    };
    let trace = random_lasso(rng);
    let pos = rng.random_range(0..trace.len());
    for &interp in rule.interps {
        let ctx = EvalContext::new(&trace, interp, &eta);
        let (a, b) = (value(&ctx, &before, pos), value(&ctx, &after, pos));
        let sc = Scene {
            case: idx,
            trace: &trace,
            eta: &eta,
            interp,
        };
        t.record(&law, close(a, b), || sc.cx(pos, format!("{} => {}", format(&before), format(&after)), a, b, ""));
    }
}

fn corpus_values(idx: u64, rng: &mut ChaCha8Rng, t: &mut Tally, lowered: &Lowered) {
    let trace = random_lasso(rng);
    let eta = gen::eta_of_size(rng, CORPUS_N_ETA);
    let pos = rng.random_range(0..trace.len());
    for (interp, f, g) in lowered {
        let Ok(g) = g else { continue };
        let ctx = EvalContext::new(&trace, *interp, &eta);
        let (a, b) = (value(&ctx, f, pos), value(&ctx, g, pos));
        let sc = Scene {
            case: idx,
            trace: &trace,
            eta: &eta,
            interp: *interp,
        };
        t.record("lowering-corpus-values", close(a, b), || sc.cx(pos, format(f), a, b, "input vs lowered"));
    }
}

fn random_lowering(idx: u64, rng: &mut ChaCha8Rng, t: &mut Tally) {
    let trace = random_lasso(rng);
    let eta = gen::eta(rng, 4);
    let fg = FormulaGen {
        unbounded: true,
        max_bound: 2,
        scale_below: eta.n_eta(),
        ..FormulaGen::new(&ATOMS)
    };
    let f = fg.formula(rng, 2);
    let pos = rng.random_range(0..trace.len());
    for interp in Interpretation::ALL {
        let sc = Scene {
            case: idx,
            trace: &trace,
            eta: &eta,
            interp,
        };
        let g = match lower_to_adequate(&f, interp, eta.n_eta(), RANDOM_BUDGET) {
            Ok(g) => g,
            Err(e) => {
                let partial_ok = e.partial().size() > 0;
                t.record("lowering-failure-is-reported", partial_ok, || sc.cx(pos, format(&f), 0.0, 0.0, &e.to_string()));
                continue;
            }
        };
        t.record("lowering-is-adequate", is_adequate(&g, interp, eta.n_eta()), || {
            sc.cx(pos, format!("{} => {}", format(&f), format(&g)), 0.0, 0.0, "non-adequate node left")
        });
        let ctx = EvalContext::new(&trace, interp, &eta);
        let (a, b) = (value(&ctx, &f, pos), value(&ctx, &g, pos));
        t.record("lowering-preserves-value", close(a, b), || {
            sc.cx(pos, format!("{} => {}", format(&f), format(&g)), a, b, "")
        });
    }
}

fn fixed_checks(t: &mut Tally, lowered: &Lowered) {
    for (interp, f, g) in lowered {
        let ok = matches!(g, Ok(g) if is_adequate(g, *interp, CORPUS_N_ETA));
        t.record("lowering-corpus-terminates", ok, || {
            plain_cx(format(f), 0.0, 0.0, format!("{interp}: {:?}", g.as_ref().err()))
        });
    }

    let dual = rules().iter().find(|r| r.name == "FG-dual").expect("FG-dual is shipped");
    for interp in [Interpretation::Godel, Interpretation::Product] {
        t.record("FG-dual-excluded", !dual.applies_to(interp), || {
            plain_cx(String::from("G p"), 0.0, 0.0, format!("FG-dual listed for {interp}"))
        });
        let trace = Trace::single("p", &[0.5], Some(0)).expect("trace");
        let eta = AvoidingFunction::crisp();
        let ctx = EvalContext::new(&trace, interp, &eta);
        let g = value(&ctx, &parse("G p").expect("parses"), 0);
        let d = value(&ctx, &parse("!F!p").expect("parses"), 0);
        t.record("FG-dual-excluded", g != d, || plain_cx(String::from("G p vs !F!p"), g, d, interp.to_string()));
    }

    let eta = crate::eta_spec::parse_eta("gauss:20").expect("valid");
    let ag = parse("AG[4] p").expect("parses");
    let r = lower_to_adequate(&ag, Interpretation::Product, eta.n_eta(), 1_000);
    t.record("product-almost-always-blowup", matches!(r, Err(LowerError::BudgetExceeded { .. })), || {
        plain_cx(format(&ag), 0.0, 0.0, format!("{:?}", r.as_ref().map(Formula::size)))
    });
    for interp in [Interpretation::Zadeh, Interpretation::Godel, Interpretation::Lukasiewicz] {
        let r = lower_to_adequate(&ag, interp, eta.n_eta(), DEFAULT_BUDGET);
        t.record("product-almost-always-blowup", r.is_ok(), || {
            plain_cx(format(&ag), 0.0, 0.0, format!("{interp} lowering fails: {:?}", r.as_ref().err()))
        });
    }
}
