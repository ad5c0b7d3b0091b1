use ftl_core::oracle::{almost_always_enumerate, ltl_evaluate, oracle_almost_always};
use ftl_core::rewrite::{is_adequate, lower_to_adequate, rule_by_name, rules, RuleEnv};
use ftl_core::{
    almost_always_fast, evaluate, parse, trace_at, AvoidingFunction, EvalContext,
    Exactness, Formula, Interpretation, Trace,
};
use ftl_core::eval::almost_always_values;
use proptest::prelude::*;

fn interp() -> impl Strategy<Value = Interpretation> {
    prop::sample::select(Interpretation::ALL.to_vec())
}

/// Strictly decreasing tables with η(0) = 1.
fn eta(max_n: usize) -> impl Strategy<Value = AvoidingFunction> {
    prop::collection::vec(0.01f64..0.99, 0..max_n).prop_map(|mut tail| {
        tail.sort_by(|a, b| b.partial_cmp(a).unwrap());
        tail.dedup();
        let mut t = vec![1.0];
        t.extend(tail);
        AvoidingFunction::new(t).unwrap()
    })
}

fn degree() -> impl Strategy<Value = f64> {
    prop_oneof![1 => Just(0.0), 1 => Just(1.0), 6 => 0.0f64..=1.0]
}

fn lasso(values: BoxedStrategy<f64>, max_len: usize) -> impl Strategy<Value = Trace> {
    (1..=max_len)
        .prop_flat_map(move |len| (prop::collection::vec((values.clone(), values.clone()), len), 0..len))
        .prop_map(|(rows, start)| {
            let states = rows.into_iter().map(|(p, q)| vec![p, q]).collect();
            Trace::new(vec!["p".into(), "q".into()], states, Some(start)).unwrap()
        })
}

fn formula(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![Just(Formula::atom("p")), Just(Formula::atom("q"))];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        let bin = (inner.clone(), inner.clone());
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::next),
            inner.clone().prop_map(Formula::soon),
            (0..3u32, inner.clone()).prop_map(|(t, f)| Formula::eventually_b(t, f)),
            (0..3u32, inner.clone()).prop_map(|(t, f)| Formula::always_b(t, f)),
            (0..3u32, inner.clone()).prop_map(|(t, f)| Formula::almost_always_b(t, f)),
            (0..3u32, inner.clone()).prop_map(|(t, f)| Formula::lasts(t, f)),
            (0..3u32, inner.clone()).prop_map(|(t, f)| Formula::within(t, f)),
            bin.clone().prop_map(|(a, b)| Formula::and(a, b)),
            bin.clone().prop_map(|(a, b)| Formula::or(a, b)),
            bin.clone().prop_map(|(a, b)| Formula::implies(a, b)),
            bin.clone().prop_map(|(a, b)| Formula::weak_or(a, b)),
            (0..3u32, bin.clone()).prop_map(|(t, (a, b))| Formula::until_b(t, a, b)),
            (0..3u32, bin).prop_map(|(t, (a, b))| Formula::almost_until_b(t, a, b)),
        ]
    })
}

fn value(ctx: &EvalContext<'_>, f: &Formula, pos: usize) -> f64 {
    evaluate(ctx, f, pos).unwrap().value.value()
}

#[test]
fn worked_almost_always_example() {
    let trace = Trace::single("p", &[0.1, 0.2, 1.0, 0.1], None).unwrap();
    let eta = AvoidingFunction::new(vec![1.0, 0.5, 0.3]).unwrap();
    let ctx = EvalContext::new(&trace, Interpretation::Zadeh, &eta);
    let p = Formula::atom("p");
    for (t, expected) in [(1, 0.1), (2, 0.3), (3, 0.1)] {
        let fast = almost_always_fast(&ctx, &p, 0, t).unwrap().value();
        let slow = oracle_almost_always(&ctx, &p, 0, t).unwrap().value();
        assert!((fast - expected).abs() <= 1e-12, "AG[{t}] = {fast}");
        assert_eq!(fast, slow);
        let r = evaluate(&ctx, &Formula::almost_always_b(t, p.clone()), 0).unwrap();
        assert_eq!((r.value.value(), r.exactness), (fast, Exactness::Exact));
    }
}

#[test]
fn finite_trace_examples() {
    let trace = Trace::single("q", &[0.2, 0.7, 0.4], None).unwrap();
    let eta = AvoidingFunction::crisp();
    let ctx = EvalContext::new(&trace, Interpretation::Zadeh, &eta);
    let r = evaluate(&ctx, &parse("X q").unwrap(), 0).unwrap();
    assert_eq!((r.value.value(), r.exactness), (0.7, Exactness::Exact));
    let r = evaluate(&ctx, &parse("G q").unwrap(), 0).unwrap();
    assert_eq!((r.value.value(), r.exactness), (0.2, Exactness::UpperBound));
    let r = evaluate(&ctx, &parse("F q").unwrap(), 0).unwrap();
    assert_eq!((r.value.value(), r.exactness), (0.7, Exactness::LowerBound));
}

#[test]
fn duality_fails_without_involutive_negation() {
    let trace = Trace::single("p", &[0.5], Some(0)).unwrap();
    let eta = AvoidingFunction::crisp();
    let dual = rule_by_name("FG-dual").unwrap();
    for interp in [Interpretation::Godel, Interpretation::Product] {
        assert!(!dual.applies_to(interp));
        let ctx = EvalContext::new(&trace, interp, &eta);
        assert_ne!(value(&ctx, &parse("G p").unwrap(), 0), value(&ctx, &parse("!F!p").unwrap(), 0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn invalid_eta_tables_are_rejected(
        mut tail in prop::collection::vec(0.0f64..=1.0, 1..6),
        flaw in 0..4usize,
    ) {
        let table = match flaw {
            0 => { let mut t = vec![0.9]; t.append(&mut tail); t }
            1 => { let x = tail[0]; vec![1.0, x, x] }
            2 => { tail[0] = 1.0; let mut t = vec![1.0]; t.append(&mut tail); t }
            _ => { let mut t = vec![1.0]; t.append(&mut tail); t.push(-0.5); t }
        };
        prop_assert!(AvoidingFunction::new(table.clone()).is_err(), "{:?}", table);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn lasso_lookup_is_periodic(trace in lasso(degree().boxed(), 12), extra in 0..40usize) {
        let pos = trace.loop_start().unwrap() + extra;
        for atom in ["p", "q"] {
            prop_assert_eq!(
                trace_at(&trace, pos, atom).unwrap(),
                trace_at(&trace, pos + trace.loop_len(), atom).unwrap()
            );
        }
    }

    #[test]
    fn almost_always_matches_enumeration_on_dyadic_values(
        vals in prop::collection::vec((0..=16u32).prop_map(|k| k as f64 / 16.0), 1..=13),
        eta in eta(4),
        interp in interp(),
    ) {
        prop_assert_eq!(almost_always_values(interp, &eta, &vals), almost_always_enumerate(interp, &eta, &vals));
    }

    #[test]
    fn almost_always_matches_enumeration_on_reals(
        vals in prop::collection::vec(degree(), 1..=13),
        eta in eta(4),
        interp in interp(),
    ) {
        let a = almost_always_values(interp, &eta, &vals);
        let b = almost_always_enumerate(interp, &eta, &vals);
        prop_assert!((a - b).abs() <= 1e-12, "{} vs {}", a, b);
    }

    #[test]
    fn values_are_degrees(trace in lasso(degree().boxed(), 8), f in formula(3), eta in eta(4), interp in interp(), pos in 0..10usize) {
        let ctx = EvalContext::new(&trace, interp, &eta);
        let r = evaluate(&ctx, &f, pos).unwrap();
        prop_assert!((0.0..=1.0).contains(&r.value.value()));
        prop_assert_eq!(r.exactness, Exactness::Exact);
        prop_assert_eq!(evaluate(&ctx, &f, pos).unwrap(), r);
    }

    #[test]
    fn bounded_unfoldings_are_exact(trace in lasso(degree().boxed(), 8), f in formula(2), t in 1..6u32, eta in eta(4), interp in interp(), pos in 0..10usize) {
        let ctx = EvalContext::new(&trace, interp, &eta);
        let ft = Formula::eventually_b(t, f.clone());
        let unfolded = Formula::or(f.clone(), Formula::next(Formula::eventually_b(t - 1, f.clone())));
        prop_assert_eq!(value(&ctx, &ft, pos), value(&ctx, &unfolded, pos));
        let gt = Formula::always_b(t, f.clone());
        let unfolded = Formula::and(f.clone(), Formula::next(Formula::always_b(t - 1, f)));
        prop_assert_eq!(value(&ctx, &gt, pos), value(&ctx, &unfolded, pos));
    }

    #[test]
    fn within_is_squeezed(trace in lasso(degree().boxed(), 8), f in formula(2), t in 0..6u32, eta in eta(5), interp in interp(), pos in 0..10usize) {
        let ctx = EvalContext::new(&trace, interp, &eta);
        let w = value(&ctx, &Formula::within(t, f.clone()), pos);
        let lo = value(&ctx, &Formula::eventually_b(t, f.clone()), pos);
        let hi = value(&ctx, &Formula::eventually_b(t + eta.n_eta() as u32, f), pos);
        prop_assert!(lo <= w + 1e-12 && w <= hi + 1e-12, "{} <= {} <= {}", lo, w, hi);
    }

    #[test]
    fn crisp_traces_follow_ltl(trace in lasso(prop_oneof![Just(0.0), Just(1.0)].boxed(), 8), f in formula(3), interp in interp(), pos in 0..10usize) {
        let eta = AvoidingFunction::crisp();
        let ctx = EvalContext::new(&trace, interp, &eta);
        let v = value(&ctx, &f, pos);
        let b = ltl_evaluate(&trace, &f, pos).unwrap().value;
        prop_assert_eq!(v, if b { 1.0 } else { 0.0 });
    }

    #[test]
    fn rules_preserve_values(trace in lasso(degree().boxed(), 6), f in formula(3), eta in eta(4), pos in 0..8usize) {
        let env = RuleEnv { n_eta: eta.n_eta() };
        for rule in rules() {
            let Some(g) = rule.apply_root(&f, &env) else { continue };
            for &interp in rule.interps {
                let ctx = EvalContext::new(&trace, interp, &eta);
                let (a, b) = (value(&ctx, &f, pos), value(&ctx, &g, pos));
                prop_assert!((a - b).abs() <= 1e-12, "{}: {} vs {}", rule.name, a, b);
            }
        }
    }

    #[test]
    fn zadeh_and_godel_lowering_is_sound(trace in lasso(degree().boxed(), 6), f in formula(2), eta in eta(3), pos in 0..8usize) {
        for interp in [Interpretation::Zadeh, Interpretation::Godel] {
            let g = lower_to_adequate(&f, interp, eta.n_eta(), 100_000).unwrap();
            prop_assert!(is_adequate(&g, interp, eta.n_eta()));
            let ctx = EvalContext::new(&trace, interp, &eta);
            let (a, b) = (value(&ctx, &f, pos), value(&ctx, &g, pos));
            prop_assert!((a - b).abs() <= 1e-12, "{} vs {}", a, b);
        }
    }
}
