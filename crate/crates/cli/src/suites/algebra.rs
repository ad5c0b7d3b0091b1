//! Connective laws on grids of [0, 1].

use ftl_core::algebra::{drastic_product, drastic_sum};
use ftl_core::Interpretation;

use super::{Counterexample, SuiteReport, Tally, TOL};

fn grid(step_count: u32) -> Vec<f64> {
    (0..=step_count).map(|k| k as f64 / step_count as f64).collect()
}

fn cx(interp: Interpretation, args: &[f64], lhs: f64, rhs: f64, note: &str) -> Counterexample {
    Counterexample {
        case: 0,
        interp: Some(interp),
        pos: None,
        trace: None,
        eta: None,
        formula: format!("{args:?}"),
        lhs,
        rhs,
        note: note.to_string(),
    }
}

fn le(a: f64, b: f64) -> bool {
    a <= b + TOL
}

fn eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL
}

pub fn run() -> SuiteReport {
    let mut t = Tally::default();
    let fine = grid(20);
    let coarse = grid(10);
    for i in Interpretation::ALL {
        let (neg, tn, tc, imp) = (
            |a| i.neg(a),
            |a, b| i.tnorm(a, b),
            |a, b| i.tconorm(a, b),
            |a, b| i.implies(a, b),
        );

        for (name, lhs, rhs) in [
            ("boundary", neg(0.0), 1.0),
            ("boundary", neg(1.0), 0.0),
        ] {
            t.record(name, lhs == rhs, || cx(i, &[], lhs, rhs, "negation"));
        }

        for &a in &fine {
            let cases = [
                (tn(a, 0.0), 0.0, "a*0 = 0"),
                (tn(a, 1.0), a, "a*1 = a"),
                (tc(a, 0.0), a, "a+0 = a"),
                (tc(a, 1.0), 1.0, "a+1 = 1"),
                (imp(1.0, a), a, "1=>b = b"),
                (imp(0.0, a), 1.0, "0=>b = 1"),
                (imp(a, 1.0), 1.0, "a=>1 = 1"),
                (imp(a, 0.0), neg(a), "a=>0 = neg a"),
            ];
            for (lhs, rhs, note) in cases {
                t.record("boundary", eq(lhs, rhs), || cx(i, &[a], lhs, rhs, note));
            }

            for &b in &fine {
                let (n, m) = (tn(a, b), tc(a, b));
                t.record("drastic-sandwich", le(drastic_product(a, b), n) && le(n, a.min(b)), || {
                    cx(i, &[a, b], drastic_product(a, b), n, "d- <= tnorm <= min")
                });
                t.record("drastic-sandwich", le(a.max(b), m) && le(m, drastic_sum(a, b)), || {
                    cx(i, &[a, b], m, drastic_sum(a, b), "max <= tconorm <= d+")
                });
                t.record("commutativity", n == tn(b, a) && m == tc(b, a), || {
                    cx(i, &[a, b], n, tn(b, a), "")
                });
                t.record("monotonicity", le(n, a) && le(a, m), || {
                    cx(i, &[a, b], n, m, "a*b <= a <= a+b")
                });
                let floor = neg(a).max(b);
                t.record("implication-floor", le(floor, imp(a, b)), || {
                    cx(i, &[a, b], imp(a, b), floor, "a=>b >= max(neg a, b)")
                });
                let wa = i.weak_and(a, b);
                let wo = i.weak_or(a, b);
                t.record("weak-and-is-min", eq(wa, a.min(b)), || cx(i, &[a, b], wa, a.min(b), ""));
                t.record("weak-or-is-max", eq(wo, a.max(b)), || cx(i, &[a, b], wo, a.max(b), ""));
                if a <= b {
                    t.record("monotonicity", le(neg(b), neg(a)), || {
                        cx(i, &[a, b], neg(a), neg(b), "negation")
                    });
                    for &c in &fine {
                        let ok = le(tn(c, a), tn(c, b))
                            && le(tc(c, a), tc(c, b))
                            && le(imp(b, c), imp(a, c))
                            && le(imp(c, a), imp(c, b));
                        t.record("monotonicity", ok, || cx(i, &[a, b, c], 0.0, 0.0, "a <= b"));
                    }
                }
                if matches!(i, Interpretation::Godel | Interpretation::Product) {
                    for &c in &fine {
                        let left = le(tn(a, c), b);
                        let right = c <= imp(a, b) + TOL / a.max(TOL);
                        let strict_left = tn(a, c) <= b - TOL;
                        let strict_right = c <= imp(a, b) - TOL / a.max(TOL);
                        let ok = (!strict_left || right) && (!strict_right || left);
                        t.record("residuation", ok, || {
                            cx(i, &[a, b, c], tn(a, c), imp(a, b), "a*c <= b iff c <= a=>b")
                        });
                    }
                }
            }
        }

        for &a in &coarse {
            for &b in &coarse {
                for &c in &coarse {
                    let (l1, r1) = (tn(tn(a, b), c), tn(a, tn(b, c)));
                    let (l2, r2) = (tc(tc(a, b), c), tc(a, tc(b, c)));
                    t.record("associativity", eq(l1, r1) && eq(l2, r2), || {
                        cx(i, &[a, b, c], l1.max(l2), r1.max(r2), "")
                    });
                }
            }
        }
    }
    t.into_report("algebra")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_laws_hold() {
        let r = run();
        assert!(r.passed(), "{r}");
        assert_eq!(r.laws.len(), 9);
    }
}
