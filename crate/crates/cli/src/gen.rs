//! Random traces, avoiding functions and formulas.

use ftl_core::{AvoidingFunction, Bound, Formula, Trace};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ATOMS: [&str; 2] = ["p", "q"];

/// Generator for case `case` of a run seeded with `seed`.
pub fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Finite,
    Lasso,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Values {
    /// Uniform on [0, 1], with extra mass on 0 and 1.
    Uniform,
    /// Multiples of `1/k`.
    Grid(u32),
    Crisp,
}

impl Values {
    pub fn draw<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        match self {
            Values::Uniform => match rng.random_range(0..10) {
                0 => 0.0,
                1 => 1.0,
                _ => rng.random(),
            },
            Values::Grid(k) => rng.random_range(0..=k) as f64 / k as f64,
            Values::Crisp => f64::from(u8::from(rng.random_bool(0.5))),
        }
    }
}

pub fn trace<R: Rng + ?Sized>(
    rng: &mut R,
    atoms: &[&str],
    len: usize,
    shape: Shape,
    values: Values,
) -> Trace {
    let states = (0..len)
        .map(|_| atoms.iter().map(|_| values.draw(rng)).collect())
        .collect();
    let loop_start = match shape {
        Shape::Finite => None,
        Shape::Lasso => Some(rng.random_range(0..len)),
    };
    Trace::new(atoms.iter().map(|a| a.to_string()).collect(), states, loop_start)
        .expect("generated trace is valid")
}

/// A lasso whose states are all equal.
pub fn constant_lasso<R: Rng + ?Sized>(rng: &mut R, atoms: &[&str], len: usize, values: Values) -> Trace {
    let state: Vec<f64> = atoms.iter().map(|_| values.draw(rng)).collect();
    Trace::new(
        atoms.iter().map(|a| a.to_string()).collect(),
        vec![state; len],
        Some(rng.random_range(0..len)),
    )
    .expect("generated trace is valid")
}

/// A random avoiding function with `1 ≤ n_η ≤ max_n`.
pub fn eta<R: Rng + ?Sized>(rng: &mut R, max_n: usize) -> AvoidingFunction {
    let n = rng.random_range(1..=max_n);
    eta_of_size(rng, n)
}

pub fn eta_of_size<R: Rng + ?Sized>(rng: &mut R, n: usize) -> AvoidingFunction {
    loop {
        let mut rest: Vec<f64> = (1..n).map(|_| rng.random_range(0.01..0.99)).collect();
        rest.sort_by(|a, b| b.total_cmp(a));
        let mut table = vec![1.0];
        table.extend(rest);
        if let Ok(eta) = AvoidingFunction::new(table) {
            return eta;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Op {
    Not,
    And,
    Or,
    Implies,
    WeakAnd,
    WeakOr,
    Next,
    Soon,
    EventuallyB,
    AlwaysB,
    AlmostAlwaysB,
    Lasts,
    Within,
    UntilB,
    AlmostUntilB,
    Eventually,
    Always,
    AlmostAlways,
    Until,
    AlmostUntil,
    Scale,
}

/// Random formula trees.
#[derive(Clone, Debug)]
pub struct FormulaGen {
    pub atoms: Vec<String>,
    pub max_bound: Bound,
    /// Allow `F`, `G`, `AG`, `U`, `AU` (meaningful on lassos only).
    pub unbounded: bool,
    /// Allow the almost operators `S`, `W`, `AG`, `L`, `AU`.
    pub almost: bool,
    /// Allow temporal operators at all.
    pub temporal: bool,
    pub weak: bool,
    pub constants: bool,
    /// `O[j]` is generated for `1 ≤ j < scale_below`.
    pub scale_below: usize,
}

impl FormulaGen {
    pub fn new(atoms: &[&str]) -> Self {
        FormulaGen {
            atoms: atoms.iter().map(|a| a.to_string()).collect(),
            max_bound: 3,
            unbounded: false,
            almost: true,
            temporal: true,
            weak: true,
            constants: true,
            scale_below: 0,
        }
    }

    /// Only `!`, `&`, `|`, `->`, `X`, `F`, `G`, `U` and their bounded forms.
    pub fn classical(atoms: &[&str]) -> Self {
        FormulaGen {
            almost: false,
            weak: false,
            ..Self::new(atoms)
        }
    }

    fn ops(&self) -> Vec<Op> {
        use Op::*;
        let mut ops = vec![Not, And, Or, Implies];
        if self.weak {
            ops.extend([WeakAnd, WeakOr]);
        }
        if self.temporal {
            ops.extend([Next, EventuallyB, AlwaysB, UntilB]);
            if self.almost {
                ops.extend([Soon, AlmostAlwaysB, Lasts, Within, AlmostUntilB]);
            }
            if self.unbounded {
                ops.extend([Eventually, Always, Until]);
                if self.almost {
                    ops.extend([AlmostAlways, AlmostUntil]);
                }
            }
        }
        if self.scale_below >= 2 {
            ops.push(Scale);
        }
        ops
    }

    pub fn leaf<R: Rng + ?Sized>(&self, rng: &mut R) -> Formula {
        if self.constants && rng.random_range(0..8) == 0 {
            return if rng.random_bool(0.5) { Formula::Top } else { Formula::Bot };
        }
        Formula::atom(self.atoms.choose(rng).expect("at least one atom").clone())
    }

    /// A tree of depth at most `depth`.
    pub fn formula<R: Rng + ?Sized>(&self, rng: &mut R, depth: usize) -> Formula {
        if depth == 0 || rng.random_range(0..4) == 0 {
            return self.leaf(rng);
        }
        let op = *self.ops().choose(rng).expect("nonempty op set");
        self.with_head(rng, op, depth)
    }

    fn with_head<R: Rng + ?Sized>(&self, rng: &mut R, op: Op, depth: usize) -> Formula {
        let sub = |rng: &mut R| self.formula(rng, depth - 1);
        let t = rng.random_range(0..=self.max_bound);
        match op {
            Op::Not => Formula::not(sub(rng)),
            Op::And => Formula::and(sub(rng), sub(rng)),
            Op::Or => Formula::or(sub(rng), sub(rng)),
            Op::Implies => Formula::implies(sub(rng), sub(rng)),
            Op::WeakAnd => Formula::weak_and(sub(rng), sub(rng)),
            Op::WeakOr => Formula::weak_or(sub(rng), sub(rng)),
            Op::Next => Formula::next(sub(rng)),
            Op::Soon => Formula::soon(sub(rng)),
            Op::EventuallyB => Formula::eventually_b(t, sub(rng)),
            Op::AlwaysB => Formula::always_b(t, sub(rng)),
            Op::AlmostAlwaysB => Formula::almost_always_b(t, sub(rng)),
            Op::Lasts => Formula::lasts(t, sub(rng)),
            Op::Within => Formula::within(t, sub(rng)),
            Op::UntilB => Formula::until_b(t, sub(rng), sub(rng)),
            Op::AlmostUntilB => Formula::almost_until_b(t, sub(rng), sub(rng)),
            Op::Eventually => Formula::eventually(sub(rng)),
            Op::Always => Formula::always(sub(rng)),
            Op::AlmostAlways => Formula::almost_always(sub(rng)),
            Op::Until => Formula::until(sub(rng), sub(rng)),
            Op::AlmostUntil => Formula::almost_until(sub(rng), sub(rng)),
            Op::Scale => Formula::scale(rng.random_range(1..self.scale_below) as Bound, sub(rng)),
        }
    }

    /// A formula whose root is drawn uniformly among the enabled operators,
    /// with subtrees of depth at most `depth − 1`.
    pub fn rooted<R: Rng + ?Sized>(&self, rng: &mut R, depth: usize) -> Formula {
        let op = *self.ops().choose(rng).expect("nonempty op set");
        self.with_head(rng, op, depth.max(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_independent_and_reproducible() {
        let a: u64 = case_rng(7, 0).random();
        let b: u64 = case_rng(7, 1).random();
        assert_ne!(a, b);
        assert_eq!(a, case_rng(7, 0).random::<u64>());
    }

    #[test]
    fn etas_are_valid() {
        let mut rng = case_rng(0, 0);
        for _ in 0..200 {
            let e = eta(&mut rng, 5);
            assert!((1..=5).contains(&e.n_eta()));
        }
    }

    #[test]
    fn formulas_respect_depth() {
        let mut rng = case_rng(1, 0);
        let g = FormulaGen {
            unbounded: true,
            scale_below: 3,
            ..FormulaGen::new(&ATOMS)
        };
        for _ in 0..500 {
            assert!(g.formula(&mut rng, 3).depth() <= 4);
        }
    }
}
