//! Interpretations of the connectives.
//!
//! | | ⊖α | α⊗β | α⊕β | α⊳β |
//! |---|---|---|---|---|
//! | Zadeh | 1−α | min | max | max{1−α, β} |
//! | Gödel | 1 if α=0 else 0 | min | max | 1 if α≤β else β |
//! | Łukasiewicz | 1−α | max{α+β−1, 0} | min{α+β, 1} | min{1−α+β, 1} |
//! | Product | 1 if α=0 else 0 | α·β | α+β−α·β | 1 if α≤β else β/α |
//!
//! All operations work on plain `f64` in `[0, 1]`; the evaluator wraps the
//! final result in a [`TruthDegree`].

use core::fmt;
use core::str::FromStr;

use crate::TruthDegree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Interpretation {
    Zadeh,
    Godel,
    Lukasiewicz,
    Product,
}

impl Interpretation {
    pub const ALL: [Interpretation; 4] = [
        Interpretation::Zadeh,
        Interpretation::Godel,
        Interpretation::Lukasiewicz,
        Interpretation::Product,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Interpretation::Zadeh => "zadeh",
            Interpretation::Godel => "godel",
            Interpretation::Lukasiewicz => "lukasiewicz",
            Interpretation::Product => "product",
        }
    }

    /// min-based t-norm (Zadeh, Gödel); Łukasiewicz and Product are Archimedean.
    pub fn is_idempotent(self) -> bool {
        matches!(self, Interpretation::Zadeh | Interpretation::Godel)
    }

    #[inline]
    pub fn neg(self, a: f64) -> f64 {
        match self {
            Interpretation::Zadeh | Interpretation::Lukasiewicz => 1.0 - a,
            Interpretation::Godel | Interpretation::Product => {
                if a == 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    #[inline]
    pub fn tnorm(self, a: f64, b: f64) -> f64 {
        match self {
            Interpretation::Zadeh | Interpretation::Godel => a.min(b),
            Interpretation::Lukasiewicz => {
                if a == 1.0 {
                    b
                } else if b == 1.0 {
                    a
                } else {
                    (a + b - 1.0).max(0.0)
                }
            }
            Interpretation::Product => a * b,
        }
    }

    #[inline]
    pub fn tconorm(self, a: f64, b: f64) -> f64 {
        match self {
            Interpretation::Zadeh | Interpretation::Godel => a.max(b),
            Interpretation::Lukasiewicz => (a + b).min(1.0),
            Interpretation::Product => {
                if a == 1.0 || b == 1.0 {
                    1.0
                } else {
                    (a + b - a * b).min(1.0)
                }
            }
        }
    }

    #[inline]
    pub fn implies(self, a: f64, b: f64) -> f64 {
        match self {
            Interpretation::Zadeh => (1.0 - a).max(b),
            Interpretation::Godel => {
                if a <= b {
                    1.0
                } else {
                    b
                }
            }
            Interpretation::Lukasiewicz => (1.0 - a + b).min(1.0),
            // a > b ≥ 0 here
            Interpretation::Product => {
                if a <= b {
                    1.0
                } else {
                    b / a
                }
            }
        }
    }

    /// Lattice conjunction `p ∧ (p ⇒ q)`; equals min{a, b}.
    ///
    /// Zadeh's ⇒ is not a residuum, so there the lattice meet is its own ∧.
    pub fn weak_and(self, a: f64, b: f64) -> f64 {
        match self {
            Interpretation::Zadeh => self.tnorm(a, b),
            _ => self.tnorm(a, self.implies(a, b)),
        }
    }

    /// Lattice disjunction `((p ⇒ q) ⇒ q) ∧ʷ ((q ⇒ p) ⇒ p)`; equals max{a, b}.
    pub fn weak_or(self, a: f64, b: f64) -> f64 {
        match self {
            Interpretation::Zadeh => self.tconorm(a, b),
            _ => {
                let left = self.implies(self.implies(a, b), b);
                let right = self.implies(self.implies(b, a), a);
                self.weak_and(left, right)
            }
        }
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownInterpretation;

impl fmt::Display for UnknownInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected one of zadeh, godel, lukasiewicz, product")
    }
}

impl core::error::Error for UnknownInterpretation {}

impl FromStr for Interpretation {
    type Err = UnknownInterpretation;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zadeh" | "Zadeh" | "z" => Ok(Interpretation::Zadeh),
            "godel" | "Godel" | "goedel" | "g" => Ok(Interpretation::Godel),
            "lukasiewicz" | "Lukasiewicz" | "l" => Ok(Interpretation::Lukasiewicz),
            "product" | "Product" | "p" => Ok(Interpretation::Product),
            _ => Err(UnknownInterpretation),
        }
    }
}

/// The four operations of one interpretation, as plain function pointers.
#[derive(Clone, Copy)]
pub struct ConnectiveOps {
    pub neg: fn(f64) -> f64,
    pub tnorm: fn(f64, f64) -> f64,
    pub tconorm: fn(f64, f64) -> f64,
    pub implies: fn(f64, f64) -> f64,
}

impl fmt::Debug for ConnectiveOps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConnectiveOps").finish_non_exhaustive()
    }
}

macro_rules! ops_of {
    ($i:expr) => {
        ConnectiveOps {
            neg: |a| $i.neg(a),
            tnorm: |a, b| $i.tnorm(a, b),
            tconorm: |a, b| $i.tconorm(a, b),
            implies: |a, b| $i.implies(a, b),
        }
    };
}

pub fn ops_for(interp: Interpretation) -> ConnectiveOps {
    match interp {
        Interpretation::Zadeh => ops_of!(Interpretation::Zadeh),
        Interpretation::Godel => ops_of!(Interpretation::Godel),
        Interpretation::Lukasiewicz => ops_of!(Interpretation::Lukasiewicz),
        Interpretation::Product => ops_of!(Interpretation::Product),
    }
}

/// Ordinary product, used to apply η weights.
#[inline]
pub fn scale(a: TruthDegree, w: TruthDegree) -> TruthDegree {
    TruthDegree::saturating(a.value() * w.value())
}

pub fn weak_and(interp: Interpretation, a: TruthDegree, b: TruthDegree) -> TruthDegree {
    TruthDegree::saturating(interp.weak_and(a.value(), b.value()))
}

pub fn weak_or(interp: Interpretation, a: TruthDegree, b: TruthDegree) -> TruthDegree {
    TruthDegree::saturating(interp.weak_or(a.value(), b.value()))
}

/// Drastic sum: 1 iff a + b > 0.
pub fn drastic_sum(a: f64, b: f64) -> f64 {
    if a + b > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Drastic product: 1 iff a · b = 1.
pub fn drastic_product(a: f64, b: f64) -> f64 {
    if a * b == 1.0 {
        1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Interpretation::*;

    fn d(v: f64) -> TruthDegree {
        TruthDegree::new(v).unwrap()
    }

    #[test]
    fn table_values() {
        assert_eq!(Lukasiewicz.tnorm(0.6, 0.3), 0.0);
        assert!((Product.implies(0.8, 0.4) - 0.5).abs() < 1e-15);
        assert_eq!(Godel.neg(0.3), 0.0);
        assert_eq!(Godel.neg(0.0), 1.0);
        assert_eq!(Zadeh.implies(0.3, 0.2), 0.7);
        assert_eq!(Godel.implies(0.3, 0.2), 0.2);
        assert_eq!(Godel.implies(0.2, 0.3), 1.0);
        assert_eq!(Product.implies(0.0, 0.0), 1.0);
    }

    #[test]
    fn ops_table_matches_methods() {
        for i in Interpretation::ALL {
            let ops = ops_for(i);
            for &(a, b) in &[(0.2, 0.7), (0.9, 0.1), (0.5, 0.5), (0.0, 1.0)] {
                assert_eq!((ops.neg)(a), i.neg(a));
                assert_eq!((ops.tnorm)(a, b), i.tnorm(a, b));
                assert_eq!((ops.tconorm)(a, b), i.tconorm(a, b));
                assert_eq!((ops.implies)(a, b), i.implies(a, b));
            }
        }
    }

    #[test]
    fn scale_examples() {
        assert!((scale(d(0.8), d(0.5)).value() - 0.4).abs() < 1e-15);
        assert_eq!(scale(d(0.37), TruthDegree::ONE).value(), 0.37);
        assert_eq!(scale(d(0.37), TruthDegree::ZERO).value(), 0.0);
    }

    #[test]
    fn weak_connectives_examples() {
        assert_eq!(weak_and(Godel, d(0.3), d(0.7)).value(), 0.3);
        assert!((weak_and(Lukasiewicz, d(0.6), d(0.2)).value() - 0.2).abs() < 1e-12);
        for i in Interpretation::ALL {
            assert!((weak_and(i, d(0.42), d(0.42)).value() - 0.42).abs() < 1e-12);
        }
    }

    #[test]
    fn drastic_examples() {
        assert_eq!(drastic_sum(0.5, 0.0), 1.0);
        assert_eq!(drastic_sum(0.0, 0.0), 0.0);
        assert_eq!(drastic_product(1.0, 1.0), 1.0);
        assert_eq!(drastic_product(0.99, 1.0), 0.0);
    }

    #[test]
    fn parse_names() {
        for i in Interpretation::ALL {
            assert_eq!(i.name().parse::<Interpretation>().unwrap(), i);
        }
        assert!("min".parse::<Interpretation>().is_err());
    }
}
