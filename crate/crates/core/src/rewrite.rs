//! Value-preserving rewrites and lowering into adequate connective sets.
//!
//! A rule rewrites a matching root into an equivalent formula under each of
//! its interpretations (for every trace and every avoiding function with the
//! given `n_η`). [`rewrite_once`] applies a rule at the leftmost-outermost
//! match; [`lower_to_adequate`] drives a fixed rule choice per head until
//! only the adequate connectives of the chosen interpretation remain:
//!
//! | logic | connectives |
//! |---|---|
//! | Zadeh | `!`, `&`, `X`, `U`, `AU`, `O[j]` |
//! | Gödel | `&`, `->`, `X`, `U`, `AU`, `O[j]` |
//! | Łukasiewicz | `&`, `->`, `X`, `F`, `U`, `AU`, `O[j]` |
//! | Product | `&`, `->`, `|`, `X`, `F`, `G`, `U`, `AU` |
//!
//! with atoms, `true` and `false` as leaves and `1 ≤ j < n_η`.

use alloc::format;
use alloc::vec::Vec;

use thiserror::Error;

use crate::algebra::Interpretation;
use crate::eval::ETA_ATOM_PREFIX;
use crate::formula::Bound;
use crate::Formula;

use Interpretation::{Godel as G, Lukasiewicz as L, Product as P, Zadeh as Z};

/// Parameters a rule may depend on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RuleEnv {
    pub n_eta: usize,
}

pub struct RewriteRule {
    pub name: &'static str,
    pub interps: &'static [Interpretation],
    apply: fn(&Formula, &RuleEnv) -> Option<Formula>,
}

impl RewriteRule {
    pub fn applies_to(&self, interp: Interpretation) -> bool {
        self.interps.contains(&interp)
    }

    /// The rewritten root, or `None` when the root does not match.
    pub fn apply_root(&self, f: &Formula, env: &RuleEnv) -> Option<Formula> {
        (self.apply)(f, env)
    }
}

impl core::fmt::Debug for RewriteRule {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("RewriteRule")
            .field("name", &self.name)
            .field("interps", &self.interps)
            .finish()
    }
}

const ALL: &[Interpretation] = &[Z, G, L, P];

static RULES: &[RewriteRule] = &[
    RewriteRule { name: "within-expand", interps: ALL, apply: within_expand },
    RewriteRule { name: "soon-expand", interps: ALL, apply: soon_expand },
    RewriteRule { name: "eventually-unfold", interps: ALL, apply: eventually_unfold },
    RewriteRule { name: "always-unfold", interps: ALL, apply: always_unfold },
    RewriteRule { name: "eventually-expand", interps: ALL, apply: eventually_expand },
    RewriteRule { name: "always-expand", interps: ALL, apply: always_expand },
    RewriteRule { name: "lasts-expand", interps: ALL, apply: lasts_expand },
    RewriteRule { name: "almost-always-expand", interps: ALL, apply: almost_always_expand },
    RewriteRule { name: "almost-always-crisp", interps: ALL, apply: almost_always_crisp },
    RewriteRule { name: "until-unfold", interps: ALL, apply: until_unfold },
    RewriteRule { name: "until-expand", interps: ALL, apply: until_expand },
    RewriteRule { name: "almost-until-expand", interps: ALL, apply: almost_until_expand },
    RewriteRule { name: "F-from-until", interps: &[Z, G], apply: f_from_until },
    RewriteRule { name: "FG-dual", interps: &[Z, L], apply: fg_dual },
    RewriteRule { name: "GF-dual", interps: &[Z, L], apply: gf_dual },
    RewriteRule { name: "de-morgan-or", interps: &[Z, L], apply: de_morgan_or },
    RewriteRule { name: "implies-expand", interps: &[Z], apply: implies_expand },
    RewriteRule { name: "neg-residuum", interps: &[G, L, P], apply: neg_residuum },
    RewriteRule { name: "or-residuum", interps: &[L], apply: or_residuum },
    RewriteRule { name: "or-is-max", interps: &[Z, G], apply: or_is_max },
    RewriteRule { name: "weak-and-is-and", interps: &[Z, G], apply: weak_and_is_and },
    RewriteRule { name: "weak-or-is-or", interps: &[Z, G], apply: weak_or_is_or },
    RewriteRule { name: "weak-or-expand", interps: &[G, L, P], apply: weak_or_expand },
    RewriteRule { name: "weak-or-godel", interps: &[G], apply: weak_or_godel },
    RewriteRule { name: "weak-or-lukasiewicz", interps: &[L], apply: weak_or_lukasiewicz },
    RewriteRule { name: "weak-and-expand", interps: &[G, L, P], apply: weak_and_expand },
    RewriteRule { name: "scale-to-and", interps: &[P], apply: scale_to_and },
];

pub fn rules() -> &'static [RewriteRule] {
    RULES
}

pub fn rule_by_name(name: &str) -> Option<&'static RewriteRule> {
    RULES.iter().find(|r| r.name == name)
}

/// One application at the leftmost-outermost match; `f` itself if none.
pub fn rewrite_once(f: &Formula, rule: &RewriteRule, env: &RuleEnv) -> Formula {
    try_rewrite_once(f, rule, env).unwrap_or_else(|| f.clone())
}

/// Like [`rewrite_once`], but `None` when the rule matches nowhere.
pub fn try_rewrite_once(f: &Formula, rule: &RewriteRule, env: &RuleEnv) -> Option<Formula> {
    if let Some(g) = rule.apply_root(f, env) {
        return Some(g);
    }
    let kids = f.children();
    for (idx, c) in kids.iter().enumerate() {
        if let Some(g) = try_rewrite_once(c, rule, env) {
            let parts = kids
                .iter()
                .enumerate()
                .map(|(k, c)| if k == idx { g.clone() } else { (*c).clone() })
                .collect();
            return Some(with_children(f, parts));
        }
    }
    None
}

/// The subformula [`rewrite_once`] would rewrite.
pub fn first_match<'f>(f: &'f Formula, rule: &RewriteRule, env: &RuleEnv) -> Option<&'f Formula> {
    if rule.apply_root(f, env).is_some() {
        return Some(f);
    }
    f.children().into_iter().find_map(|c| first_match(c, rule, env))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LowerError {
    #[error("size budget of {budget} nodes exceeded")]
    BudgetExceeded { partial: Formula, budget: usize },
    #[error("no rule lowers `{operator}` under {interp}")]
    Irreducible {
        partial: Formula,
        operator: &'static str,
        interp: Interpretation,
    },
}

impl LowerError {
    pub fn partial(&self) -> &Formula {
        match self {
            LowerError::BudgetExceeded { partial, .. } | LowerError::Irreducible { partial, .. } => {
                partial
            }
        }
    }
}

/// True when every node of `f` belongs to the adequate set of `interp`.
pub fn is_adequate(f: &Formula, interp: Interpretation, n_eta: usize) -> bool {
    matches!(head_step(f, interp, n_eta), Step::Adequate)
        && f.children().into_iter().all(|c| is_adequate(c, interp, n_eta))
}

/// Rewrites `f` into the adequate set of `interp`, failing once any
/// intermediate subtree (or a planned expansion) exceeds `budget` nodes.
pub fn lower_to_adequate(
    f: &Formula,
    interp: Interpretation,
    n_eta: usize,
    budget: usize,
) -> Result<Formula, LowerError> {
    let lw = Lowerer {
        interp,
        env: RuleEnv { n_eta },
        budget,
    };
    lw.lower(f).map(|(g, _)| g).map_err(|(partial, fail)| match fail {
        Fail::Budget => LowerError::BudgetExceeded { partial, budget },
        Fail::Irreducible(operator) => LowerError::Irreducible {
            partial,
            operator,
            interp,
        },
    })
}

enum Step {
    Adequate,
    Rule(&'static str),
    Irreducible(&'static str),
}

fn head_step(f: &Formula, interp: Interpretation, n_eta: usize) -> Step {
    use Formula::*;
    use Step::*;
    match f {
        Atom(_) | Top | Bot | And(..) | Next(_) | Until(..) | AlmostUntil(..) => Adequate,
        Not(_) => match interp {
            Z => Adequate,
            _ => Rule("neg-residuum"),
        },
        Or(..) => match interp {
            Z => Rule("de-morgan-or"),
            G => Rule("or-is-max"),
            L => Rule("or-residuum"),
            P => Adequate,
        },
        Implies(..) => match interp {
            Z => Rule("implies-expand"),
            _ => Adequate,
        },
        WeakAnd(..) => match interp {
            Z | G => Rule("weak-and-is-and"),
            L | P => Rule("weak-and-expand"),
        },
        WeakOr(..) => match interp {
            Z => Rule("weak-or-is-or"),
            G => Rule("weak-or-godel"),
            L => Rule("weak-or-lukasiewicz"),
            P => Rule("weak-or-expand"),
        },
        Eventually(_) => match interp {
            Z | G => Rule("F-from-until"),
            L | P => Adequate,
        },
        Always(_) => match interp {
            Z | L => Rule("FG-dual"),
            G => Irreducible("G"),
            P => Adequate,
        },
        AlmostAlways(_) if n_eta == 1 => Rule("almost-always-crisp"),
        AlmostAlways(_) => Irreducible("AG"),
        Scale(j, _) => {
            if *j < 1 || *j as usize >= n_eta {
                Irreducible("O[j]")
            } else if interp == P {
                Rule("scale-to-and")
            } else {
                Adequate
            }
        }
        EventuallyB(..) => Rule("eventually-expand"),
        AlwaysB(..) => Rule("always-expand"),
        UntilB(..) => Rule("until-expand"),
        Within(..) => Rule("within-expand"),
        Soon(_) => Rule("soon-expand"),
        Lasts(..) => Rule("lasts-expand"),
        AlmostAlwaysB(..) if n_eta == 1 => Rule("almost-always-crisp"),
        AlmostAlwaysB(..) => Rule("almost-always-expand"),
        AlmostUntilB(..) => Rule("almost-until-expand"),
    }
}

enum Fail {
    Budget,
    Irreducible(&'static str),
}

struct Lowerer {
    interp: Interpretation,
    env: RuleEnv,
    budget: usize,
}

impl Lowerer {
    /// The lowered formula and its size, or a partial result.
    fn lower(&self, f: &Formula) -> Result<(Formula, usize), (Formula, Fail)> {
        let kids = f.children();
        let mut done = Vec::with_capacity(kids.len());
        let mut size = 1usize;
        for (idx, c) in kids.iter().enumerate() {
            match self.lower(c) {
                Ok((g, s)) => {
                    done.push(g);
                    size = size.saturating_add(s);
                }
                Err((partial, fail)) => {
                    done.push(partial);
                    done.extend(kids[idx + 1..].iter().map(|c| (*c).clone()));
                    return Err((with_children(f, done), fail));
                }
            }
        }
        let g = with_children(f, done);
        match head_step(&g, self.interp, self.env.n_eta) {
            Step::Adequate => {
                if size > self.budget {
                    Err((g, Fail::Budget))
                } else {
                    Ok((g, size))
                }
            }
            Step::Irreducible(op) => Err((g, Fail::Irreducible(op))),
            Step::Rule(name) => {
                if let Some(n) = expansion_size(&g, &self.env) {
                    if n > self.budget as u128 {
                        return Err((g, Fail::Budget));
                    }
                }
                let rule = rule_by_name(name).expect("lowering rule exists");
                match rule.apply_root(&g, &self.env) {
                    Some(h) => self.lower(&h),
                    None => Err((g, Fail::Irreducible(f.head_name()))),
                }
            }
        }
    }
}

/// Node count of the formula an expanding rule builds at this root.
///
/// For `AU[t]` the count includes the full expansion of every `AG[k−1]`.
pub fn expansion_size(f: &Formula, env: &RuleEnv) -> Option<u128> {
    use Formula::*;
    let n_eta = env.n_eta as u128;
    let sz = |a: &Formula| a.size() as u128;
    Some(match f {
        EventuallyB(t, a) | AlwaysB(t, a) => {
            let (t, s) = (*t as u128, sz(a));
            t * (t + 1) / 2 + (t + 1) * s + t
        }
        UntilB(t, a, b) => {
            let (sa, sb) = (sz(a), sz(b));
            let mut total = sb + *t as u128;
            for k in 1..=*t as u128 {
                total = total.saturating_add(k + sb + 1 + k * (k - 1) / 2 + k * sa + k - 1);
            }
            total
        }
        Soon(a) => {
            let s = sz(a);
            (1..=n_eta).map(|d| d + s + u128::from(d >= 2)).sum::<u128>() + n_eta - 1
        }
        Lasts(t, a) => {
            let m = (*t as u128).min(n_eta - 1);
            (0..=m).map(|j| 1 + sz(a) + u128::from(j >= 1)).sum::<u128>() + m
        }
        Within(0, a) => {
            let s = sz(a);
            (0..n_eta).map(|m| m + s + u128::from(m >= 1)).sum::<u128>() + n_eta - 1
        }
        Within(t, a) => 2 + *t as u128 + 2 * sz(a),
        AlmostAlwaysB(t, a) => almost_always_size(*t, sz(a), env.n_eta),
        AlmostUntilB(t, a, b) => {
            let (sa, sb) = (sz(a), sz(b));
            let mut total = sb + *t as u128;
            for k in 1..=*t {
                let ag = almost_always_size(k - 1, sa, env.n_eta);
                total = total.saturating_add(k as u128 + sb + 1).saturating_add(ag);
            }
            total
        }
        _ => return None,
    })
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c.saturating_mul(n - i) / (i + 1);
    }
    c
}

fn almost_always_size(t: Bound, s: u128, n_eta: usize) -> u128 {
    let t = t as u128;
    let n = t + 1;
    let jmax = t.min(n_eta as u128 - 1);
    let mut total: u128 = 0;
    let mut terms: u128 = 0;
    for j in 0..=jmax {
        let c = binomial(n, j);
        let m = n - j;
        let per = (m - 1) + m.saturating_mul(s) + u128::from(j >= 1);
        let xs = binomial(t, m - 1).saturating_mul(t * (t + 1) / 2);
        total = total.saturating_add(c.saturating_mul(per)).saturating_add(xs);
        terms = terms.saturating_add(c);
    }
    total.saturating_add(terms - 1)
}

/// Same variant as `f` with new children, in [`Formula::children`] order.
fn with_children(f: &Formula, parts: Vec<Formula>) -> Formula {
    use Formula::*;
    let mut it = parts.into_iter();
    let mut next = || it.next().expect("child count");
    match f {
        Atom(_) | Top | Bot => f.clone(),
        Not(_) => Formula::not(next()),
        Next(_) => Formula::next(next()),
        Soon(_) => Formula::soon(next()),
        Eventually(_) => Formula::eventually(next()),
        Always(_) => Formula::always(next()),
        AlmostAlways(_) => Formula::almost_always(next()),
        EventuallyB(t, _) => Formula::eventually_b(*t, next()),
        AlwaysB(t, _) => Formula::always_b(*t, next()),
        AlmostAlwaysB(t, _) => Formula::almost_always_b(*t, next()),
        Lasts(t, _) => Formula::lasts(*t, next()),
        Within(t, _) => Formula::within(*t, next()),
        Scale(j, _) => Formula::scale(*j, next()),
        And(..) => Formula::and(next(), next()),
        Or(..) => Formula::or(next(), next()),
        Implies(..) => Formula::implies(next(), next()),
        WeakAnd(..) => Formula::weak_and(next(), next()),
        WeakOr(..) => Formula::weak_or(next(), next()),
        Until(..) => Formula::until(next(), next()),
        AlmostUntil(..) => Formula::almost_until(next(), next()),
        UntilB(t, ..) => Formula::until_b(*t, next(), next()),
        AlmostUntilB(t, ..) => Formula::almost_until_b(*t, next(), next()),
    }
}

/// Joins `terms` pairwise into a balanced tree.
fn balanced(mut terms: Vec<Formula>, join: fn(Formula, Formula) -> Formula) -> Formula {
    assert!(!terms.is_empty());
    if terms.len() == 1 {
        return terms.pop().unwrap();
    }
    let right = terms.split_off(terms.len() / 2);
    join(balanced(terms, join), balanced(right, join))
}

/// `⊙^j φ`, with `⊙^0 φ = φ`.
fn scaled(j: usize, f: Formula) -> Formula {
    if j == 0 {
        f
    } else {
        Formula::scale(j as Bound, f)
    }
}

fn next_n(k: usize, f: &Formula) -> Formula {
    Formula::next_n(k, f.clone())
}

/// `W[t] φ ≡ F[t−1] φ | X^{t−1} S φ` for `t ≥ 1`, and
/// `W[0] φ ≡ φ | X O[1] φ | … | X^{n_η−1} O[n_η−1] φ`.
fn within_expand(f: &Formula, env: &RuleEnv) -> Option<Formula> {
    let Formula::Within(t, a) = f else { return None };
    let t = *t as usize;
    Some(if t >= 1 {
        Formula::or(
            Formula::eventually_b((t - 1) as Bound, (**a).clone()),
            next_n(t - 1, &Formula::soon((**a).clone())),
        )
    } else {
        let terms = (0..env.n_eta).map(|m| scaled(m, next_n(m, a))).collect();
        balanced(terms, Formula::or)
    })
}

fn soon_expand(f: &Formula, env: &RuleEnv) -> Option<Formula> {
    let Formula::Soon(a) = f else { return None };
    let terms = (1..=env.n_eta).map(|d| scaled(d - 1, next_n(d, a))).collect();
    Some(balanced(terms, Formula::or))
}

fn eventually_unfold(f: &Formula, _: &RuleEnv) -> Option<Formula> {
    let Formula::EventuallyB(t, a) = f else { return None };
    Some(match t {
        0 => (**a).clone(),
        _ => Formula::or((**a).clone(), Formula::next(Formula::eventually_b(t - 1, (**a).clone()))),
    })
}

fn always_unfold(f: &Formula, _: &RuleEnv) -> Option<Formula> {
    let Formula::AlwaysB(t, a) = f else { return None };
    Some(match t {
        0 => (**a).clone(),
        _ => Formula::and((**a).clone(), Formula::next(Formula::always_b(t - 1, (**a).clone()))),
    })
}

fn eventually_expand(f: &Formula, _: &RuleEnv) -> Option<Formula> {
    let Formula::EventuallyB(t, a) = f else { return None };
    let terms = (0..=*t as usize).map(|d| next_n(d, a)).collect();
    Some(balanced(terms, Formula::or))
}

fn always_expand(f: &Formula, _: &RuleEnv) -> Option<Formula> {
    let Formula::AlwaysB(t, a) = f else { return None };
    let terms = (0..=*t as usize).map(|d| next_n(d, a)).collect();
    Some(balanced(terms, Formula::and))
}

fn lasts_expand(f: &Formula, env: &RuleEnv) -> Option<Formula> {
    let Formula::Lasts(t, a) = f else { return None };
    let m = (*t as usize).min(env.n_eta - 1);
    let terms = (0..=m)
        .map(|j| scaled(j, Formula::always_b(t - j as Bound, (**a).clone())))
        .collect();
    Some(balanced(terms, Formula::weak_or))
}

/// Visits every `j`-subset of `0..n` as a sorted index list.
fn for_each_subset(n: usize, j: usize, mut visit: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..j).collect();
    loop {
        visit(&idx);
        let mut i = j;
        while i > 0 && idx[i - 1] == n - j + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for k in i..j {
            idx[k] = idx[k - 1] + 1;
        }
    }
}

fn almost_always_expand(f: &Formula, env: &RuleEnv) -> Option<Formula> {
    let Formula::AlmostAlwaysB(t, a) = f else { return None };
    let n = *t as usize + 1;
    let mut terms = Vec::new();
    for j in 0..=(*t as usize).min(env.n_eta - 1) {
        for_each_subset(n, j, |avoided| {
            let kept = (0..n).filter(|h| !avoided.contains(h)).map(|h| next_n(h, a)).collect();
            terms.push(scaled(j, balanced(kept, Formula::and)));
        });
    }
    Some(balanced(terms, Formula::weak_or))
}

fn almost_always_crisp(f: &Formula, env: &RuleEnv) -> Option<Formula> {
    if env.n_eta != 1 {
        return None;
    }
    match f {
        Formula::AlmostAlways(a) => Some(Formula::always((**a).clone())),
        Formula::AlmostAlwaysB(t, a) => Some(Formula::always_b(*t, (**a).clone())),
        _ => None,
    }
}

fn until_unfold(f: &Formula, _: &RuleEnv) -> Option<Formula> {
    let Formula::UntilB(t, a, b) = f else { return None };
    Some(match t {
        0 => (**b).clone(),
        _ => Formula::weak_or(
            (**b).clone(),
            Formula::and(
                (**a).clone(),
                Formula::next(Formula::until_b(t - 1, (**a).clone(), (**b).clone())),
            ),
        ),
    })
}

fn until_expand(f: &Formula, _: &RuleEnv) -> Option<Formula> {
    let Formula::UntilB(t, a, b) = f else { return None };
    let terms = (0..=*t as usize)
        .map(|k| match k {
            0 => (**b).clone(),
            _ => Formula::and(
                next_n(k, b),
                balanced((0..k).map(|h| next_n(h, a)).collect(), Formula::and),
            ),
        })
        .collect();
    Some(balanced(terms, Formula::weak_or))
}

fn almost_until_expand(f: &Formula, _: &RuleEnv) -> Option<Formula> {
    let Formula::AlmostUntilB(t, a, b) = f else { return None };
    let terms = (0..=*t)
        .map(|k| match k {
            0 => (**b).clone(),
            _ => Formula::and(
                next_n(k as usize, b),
                Formula::almost_always_b(k - 1, (**a).clone()),
            ),
        })
        .collect();
    Some(balanced(terms, Formula::weak_or))
}

fn f_from_until(f: &Formula, _: &RuleEnv) -> Option<Formula> {
    let Formula::Eventually(a) = f else { return None };
    Some(Formula::until(Formula::Top, (**a).clone()))
}

fn fg_dual(f: &Formula, _: &RuleEnv) -> Option<Formula> {
    let Formula::Always(a) = f else { return None };
    Some(Formula::not(Formula::eventually(Formula::not((**a).clone()))))
}

fn gf_dual(f: &Formula, _: &RuleEnv) -> Option<Formula> {
    let Formula::Eventually(a) = f else { return None };
    Some(Formula::not(Formula::always(Formula::not((**a).clone()))))
}

fn de_morgan_or(f: &Formula, _: &RuleEnv) -> Option<Formula> {
    let Formula::Or(a, b) = f else { return None };
    Some(Formula::not(Formula::and(
        Formula::not((**a).clone()),
        Formula::not((**b).clone()),
    )))
}

fn implies_expand(f: &Formula, _: &RuleEnv) -> Option<Formula> {
    let Formula::Implies(a, b) = f else { return None };
    Some(Formula::not(Formula::and((**a).clone(), Formula::not((**b).clone()))))
}

fn neg_residuum(f: &Formula, _: &RuleEnv) -> Option<Formula> {
    let Formula::Not(a) = f else { return None };
    Some(Formula::implies((**a).clone(), Formula::Bot))
}

fn or_residuum(f: &Formula, _: &RuleEnv) -> Option<Formula> {
    let Formula::Or(a, b) = f else { return None };
    Some(Formula::implies(
        Formula::implies((**a).clone(), Formula::Bot),
        (**b).clone(),
    ))
}

fn or_is_max(f: &Formula, _: &RuleEnv) -> Option<Formula> {
    let Formula::Or(a, b) = f else { return None };
    Some(Formula::weak_or((**a).clone(), (**b).clone()))
}

fn weak_and_is_and(f: &Formula, _: &RuleEnv) -> Option<Formula> {
    let Formula::WeakAnd(a, b) = f else { return None };
    Some(Formula::and((**a).clone(), (**b).clone()))
}

fn weak_or_is_or(f: &Formula, _: &RuleEnv) -> Option<Formula> {
    let Formula::WeakOr(a, b) = f else { return None };
    Some(Formula::or((**a).clone(), (**b).clone()))
}

fn lattice_join_parts(a: &Formula, b: &Formula) -> (Formula, Formula) {
    let (a, b) = (a.clone(), b.clone());
    (
        Formula::implies(Formula::implies(a.clone(), b.clone()), b.clone()),
        Formula::implies(Formula::implies(b, a.clone()), a),
    )
}

fn weak_or_expand(f: &Formula, _: &RuleEnv) -> Option<Formula> {
    let Formula::WeakOr(a, b) = f else { return None };
    let (l, r) = lattice_join_parts(a, b);
    Some(Formula::weak_and(l, r))
}

fn weak_or_godel(f: &Formula, _: &RuleEnv) -> Option<Formula> {
    let Formula::WeakOr(a, b) = f else { return None };
    let (l, r) = lattice_join_parts(a, b);
    Some(Formula::and(l, r))
}

fn weak_or_lukasiewicz(f: &Formula, _: &RuleEnv) -> Option<Formula> {
    let Formula::WeakOr(a, b) = f else { return None };
    Some(Formula::implies(
        Formula::implies((**a).clone(), (**b).clone()),
        (**b).clone(),
    ))
}

fn weak_and_expand(f: &Formula, _: &RuleEnv) -> Option<Formula> {
    let Formula::WeakAnd(a, b) = f else { return None };
    Some(Formula::and(
        (**a).clone(),
        Formula::implies((**a).clone(), (**b).clone()),
    ))
}

fn scale_to_and(f: &Formula, env: &RuleEnv) -> Option<Formula> {
    let Formula::Scale(j, a) = f else { return None };
    if *j < 1 || *j as usize >= env.n_eta {
        return None;
    }
    Some(Formula::and(
        (**a).clone(),
        Formula::Atom(format!("{ETA_ATOM_PREFIX}{j}")),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{format, parse};
    use alloc::vec;

    fn env(n_eta: usize) -> RuleEnv {
        RuleEnv { n_eta }
    }

    fn apply(rule: &str, text: &str, n_eta: usize) -> alloc::string::String {
        let r = rule_by_name(rule).unwrap();
        format(&rewrite_once(&parse(text).unwrap(), r, &env(n_eta)))
    }

    #[test]
    fn named_examples() {
        assert_eq!(apply("within-expand", "W[2] p", 3), "F[1] p | X S p");
        assert_eq!(apply("within-expand", "W[0] p", 3), "p | (O[1] X p | O[2] X[2] p)");
        assert_eq!(apply("FG-dual", "G p", 3), "!F!p");
        assert_eq!(apply("F-from-until", "F p", 3), "true U p");
        assert_eq!(apply("soon-expand", "S p", 2), "X p | O[1] X[2] p");
        assert_eq!(apply("eventually-unfold", "F[2] p", 2), "p | X F[1] p");
        assert_eq!(apply("until-unfold", "a U[0] b", 2), "b");
        assert_eq!(apply("scale-to-and", "O[1] p", 2), "p & __eta_1");
        assert_eq!(apply("neg-residuum", "q & !p", 2), "q & (p -> false)");
        // no match leaves the formula alone
        assert_eq!(apply("FG-dual", "F p", 3), "F p");
    }

    #[test]
    fn leftmost_outermost() {
        assert_eq!(apply("or-is-max", "(a | b) | c", 2), "a | b || c");
        assert_eq!(apply("or-is-max", "!(a | b) & (c | d)", 2), "!(a || b) & (c | d)");
    }

    #[test]
    fn no_duality_under_godel_or_product() {
        for name in ["FG-dual", "GF-dual", "de-morgan-or"] {
            let r = rule_by_name(name).unwrap();
            assert!(!r.applies_to(Interpretation::Godel));
            assert!(!r.applies_to(Interpretation::Product));
        }
    }

    #[test]
    fn subsets_enumerated() {
        let mut seen = vec![];
        for_each_subset(4, 2, |s| seen.push(s.to_vec()));
        assert_eq!(
            seen,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        let mut count = 0;
        for_each_subset(5, 0, |_| count += 1);
        assert_eq!(count, 1);
        count = 0;
        for_each_subset(3, 3, |_| count += 1);
        assert_eq!(count, 1);
    }

    #[test]
    fn expansion_sizes_are_exact() {
        let e = env(4);
        for text in [
            "F[3] (p & q)",
            "G[0] p",
            "p U[3] !q",
            "S X p",
            "L[2] p",
            "L[7] p",
            "W[2] p",
            "AG[3] p",
            "AG[5] (p | q)",
            "p AU[3] q",
        ] {
            let f = parse(text).unwrap();
            let rule = rules()
                .iter()
                .find(|r| {
                    r.name.ends_with("expand") && r.apply_root(&f, &e).is_some()
                })
                .unwrap();
            let mut g = rule.apply_root(&f, &e).unwrap();
            if text.contains("AU") {
                // count the inner AG[k-1] expansions as the estimate does
                let ag = rule_by_name("almost-always-expand").unwrap();
                while let Some(h) = try_rewrite_once(&g, ag, &e) {
                    g = h;
                }
            }
            assert_eq!(expansion_size(&f, &e), Some(g.size() as u128), "{text}");
        }
    }

    #[test]
    fn lowering_reaches_adequate_sets() {
        let f = parse("F p").unwrap();
        let z = lower_to_adequate(&f, Interpretation::Zadeh, 3, 1000).unwrap();
        assert_eq!(format(&z), "true U p");
        let s = lower_to_adequate(&parse("S p").unwrap(), Interpretation::Zadeh, 2, 1000).unwrap();
        assert!(is_adequate(&s, Interpretation::Zadeh, 2));
        for interp in Interpretation::ALL {
            let g = lower_to_adequate(&parse("W[2] (p | !q) && r").unwrap(), interp, 3, 100_000)
                .unwrap();
            assert!(is_adequate(&g, interp, 3), "{interp}: {g}");
        }
    }

    #[test]
    fn lowering_failures() {
        let f = parse("AG[4] p").unwrap();
        match lower_to_adequate(&f, Interpretation::Product, 21, 1000) {
            Err(LowerError::BudgetExceeded { budget, .. }) => assert_eq!(budget, 1000),
            other => panic!("{other:?}"),
        }
        match lower_to_adequate(&parse("q | G p").unwrap(), Interpretation::Godel, 3, 1000) {
            Err(LowerError::Irreducible { operator, partial, .. }) => {
                assert_eq!(operator, "G");
                assert_eq!(format(&partial), "q | G p");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            lower_to_adequate(&parse("F[100000] p").unwrap(), Interpretation::Zadeh, 3, 100_000),
            Err(LowerError::BudgetExceeded { .. })
        ));
    }
}
