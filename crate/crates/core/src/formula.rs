use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Bounds of bounded temporal operators and the index of `O[j]`.
pub type Bound = u32;

/// FTL abstract syntax.
///
/// `*B` variants carry a window bound `t`; `Scale(j, φ)` weights `φ` by η(j).
/// `WeakAnd` / `WeakOr` are the lattice connectives (min / max).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Top,
    Bot,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    WeakAnd(Box<Formula>, Box<Formula>),
    WeakOr(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Soon(Box<Formula>),
    Eventually(Box<Formula>),
    EventuallyB(Bound, Box<Formula>),
    Always(Box<Formula>),
    AlwaysB(Bound, Box<Formula>),
    AlmostAlways(Box<Formula>),
    AlmostAlwaysB(Bound, Box<Formula>),
    Lasts(Bound, Box<Formula>),
    Within(Bound, Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    UntilB(Bound, Box<Formula>, Box<Formula>),
    AlmostUntil(Box<Formula>, Box<Formula>),
    AlmostUntilB(Bound, Box<Formula>, Box<Formula>),
    Scale(Bound, Box<Formula>),
}

use Formula::*;

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Implies(Box::new(a), Box::new(b))
    }

    pub fn weak_and(a: Formula, b: Formula) -> Self {
        WeakAnd(Box::new(a), Box::new(b))
    }

    pub fn weak_or(a: Formula, b: Formula) -> Self {
        WeakOr(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Self {
        Next(Box::new(f))
    }

    /// `k` nested `X`; `X^0 φ = φ`.
    pub fn next_n(k: usize, mut f: Formula) -> Self {
        for _ in 0..k {
            f = Next(Box::new(f));
        }
        f
    }

    pub fn soon(f: Formula) -> Self {
        Soon(Box::new(f))
    }

    pub fn eventually(f: Formula) -> Self {
        Eventually(Box::new(f))
    }

    pub fn eventually_b(t: Bound, f: Formula) -> Self {
        EventuallyB(t, Box::new(f))
    }

    pub fn always(f: Formula) -> Self {
        Always(Box::new(f))
    }

    pub fn always_b(t: Bound, f: Formula) -> Self {
        AlwaysB(t, Box::new(f))
    }

    pub fn almost_always(f: Formula) -> Self {
        AlmostAlways(Box::new(f))
    }

    pub fn almost_always_b(t: Bound, f: Formula) -> Self {
        AlmostAlwaysB(t, Box::new(f))
    }

    pub fn lasts(t: Bound, f: Formula) -> Self {
        Lasts(t, Box::new(f))
    }

    pub fn within(t: Bound, f: Formula) -> Self {
        Within(t, Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Until(Box::new(a), Box::new(b))
    }

    pub fn until_b(t: Bound, a: Formula, b: Formula) -> Self {
        UntilB(t, Box::new(a), Box::new(b))
    }

    pub fn almost_until(a: Formula, b: Formula) -> Self {
        AlmostUntil(Box::new(a), Box::new(b))
    }

    pub fn almost_until_b(t: Bound, a: Formula, b: Formula) -> Self {
        AlmostUntilB(t, Box::new(a), Box::new(b))
    }

    pub fn scale(j: Bound, f: Formula) -> Self {
        Scale(j, Box::new(f))
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Atom(_) | Top | Bot => Vec::new(),
            Not(a) | Next(a) | Soon(a) | Eventually(a) | EventuallyB(_, a) | Always(a)
            | AlwaysB(_, a) | AlmostAlways(a) | AlmostAlwaysB(_, a) | Lasts(_, a)
            | Within(_, a) | Scale(_, a) => alloc::vec![&**a],
            And(a, b) | Or(a, b) | Implies(a, b) | WeakAnd(a, b) | WeakOr(a, b)
            | Until(a, b) | UntilB(_, a, b) | AlmostUntil(a, b) | AlmostUntilB(_, a, b) => {
                alloc::vec![&**a, &**b]
            }
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Formula::depth)
            .max()
            .unwrap_or(0)
    }

    /// Atom names in first-occurrence order.
    pub fn atoms(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a str>) {
        if let Atom(a) = self {
            if !out.contains(&a.as_str()) {
                out.push(a);
            }
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    /// True for the heads whose value is a limit over an infinite suffix.
    pub fn is_unbounded_head(&self) -> bool {
        matches!(
            self,
            Eventually(_) | Always(_) | AlmostAlways(_) | Until(..) | AlmostUntil(..)
        )
    }

    /// Short operator name of the head, used in diagnostics.
    pub fn head_name(&self) -> &'static str {
        match self {
            Atom(_) => "atom",
            Top => "true",
            Bot => "false",
            Not(_) => "!",
            And(..) => "&",
            Or(..) => "|",
            Implies(..) => "->",
            WeakAnd(..) => "&&",
            WeakOr(..) => "||",
            Next(_) => "X",
            Soon(_) => "S",
            Eventually(_) => "F",
            EventuallyB(..) => "F[t]",
            Always(_) => "G",
            AlwaysB(..) => "G[t]",
            AlmostAlways(_) => "AG",
            AlmostAlwaysB(..) => "AG[t]",
            Lasts(..) => "L[t]",
            Within(..) => "W[t]",
            Until(..) => "U",
            UntilB(..) => "U[t]",
            AlmostUntil(..) => "AU",
            AlmostUntilB(..) => "AU[t]",
            Scale(..) => "O[j]",
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::format(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_and_atoms() {
        let f = Formula::until(
            Formula::and(Formula::atom("p"), Formula::atom("q")),
            Formula::next_n(2, Formula::atom("p")),
        );
        assert_eq!(f.size(), 7);
        assert_eq!(f.depth(), 4);
        assert_eq!(f.atoms(), alloc::vec!["p", "q"]);
        assert_eq!(Formula::next_n(0, Top), Top);
    }
}
