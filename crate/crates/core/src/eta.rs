//! Avoiding functions.
//!
//! An avoiding function η penalizes the number of instants an "almost"
//! operator ignores. It is stored as the table `[η(0), …, η(n_η−1)]` of its
//! nonzero prefix: η(i) = 1 for i ≤ 0 and η(i) = 0 for i ≥ n_η.

use alloc::vec;
use alloc::vec::Vec;

use crate::{CoreError, TruthDegree};

#[derive(Clone, Debug, PartialEq)]
pub struct AvoidingFunction {
    table: Vec<f64>,
}

impl AvoidingFunction {
    /// Builds η from its table. `table[0]` must be 1, the table must be
    /// strictly decreasing and every entry must lie in `(0, 1]`.
    pub fn new(table: Vec<f64>) -> Result<Self, CoreError> {
        match table.first() {
            None => return Err(CoreError::InvalidEta("table is empty")),
            Some(&first) if first != 1.0 => {
                return Err(CoreError::InvalidEta("eta(0) must be 1"))
            }
            _ => {}
        }
        for w in table.windows(2) {
            if w[1].partial_cmp(&w[0]) != Some(core::cmp::Ordering::Less) {
                return Err(CoreError::InvalidEta("table must be strictly decreasing"));
            }
        }
        if table.iter().any(|&v| !(v > 0.0 && v <= 1.0)) {
            return Err(CoreError::InvalidEta("table entries must lie in (0, 1]"));
        }
        Ok(AvoidingFunction { table })
    }

    /// η = [1], i.e. n_η = 1: nothing may be avoided.
    pub fn crisp() -> Self {
        AvoidingFunction { table: vec![1.0] }
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn n_eta(&self) -> usize {
        self.table.len()
    }

    pub fn lookup(&self, i: i64) -> TruthDegree {
        TruthDegree::saturating(self.at(i))
    }

    pub(crate) fn at(&self, i: i64) -> f64 {
        if i <= 0 {
            1.0
        } else {
            self.weight(i as usize)
        }
    }

    /// η(i) for a natural index.
    pub fn weight(&self, i: usize) -> f64 {
        self.table.get(i).copied().unwrap_or(0.0)
    }
}

pub fn eta_lookup(eta: &AvoidingFunction, i: i64) -> TruthDegree {
    eta.lookup(i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table3() -> AvoidingFunction {
        AvoidingFunction::new(vec![1.0, 0.5, 0.3]).unwrap()
    }

    #[test]
    fn lookup_clauses() {
        let eta = table3();
        assert_eq!(eta_lookup(&eta, -2).value(), 1.0);
        assert_eq!(eta_lookup(&eta, 0).value(), 1.0);
        assert_eq!(eta_lookup(&eta, 1).value(), 0.5);
        assert_eq!(eta_lookup(&eta, 2).value(), 0.3);
        assert_eq!(eta_lookup(&eta, 3).value(), 0.0);
        assert_eq!(eta_lookup(&eta, 1000).value(), 0.0);
        assert_eq!(eta.n_eta(), 3);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(AvoidingFunction::new(vec![]).is_err());
        assert!(AvoidingFunction::new(vec![0.9, 0.5]).is_err());
        assert!(AvoidingFunction::new(vec![1.0, 0.5, 0.5]).is_err());
        assert!(AvoidingFunction::new(vec![1.0, 0.6, 0.7]).is_err());
        assert!(AvoidingFunction::new(vec![1.0, 0.0]).is_err());
        assert!(AvoidingFunction::new(vec![1.0, f64::NAN]).is_err());
        assert!(AvoidingFunction::new(vec![1.0]).is_ok());
    }

    #[test]
    fn rejects_random_invalid_tables() {
        let mut s: u64 = 0x9E37_79B9_7F4A_7C15;
        let mut next = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64
        };
        for case in 0..100 {
            let len = 2 + case % 5;
            let mut table: Vec<f64> = (0..len).map(|_| next()).collect();
            table.sort_by(|a, b| b.total_cmp(a));
            table[0] = 1.0;
            // break exactly one invariant
            match case % 3 {
                0 => table[0] = 0.5 + 0.49 * next(),
                1 => {
                    let i = 1 + case % (len - 1);
                    table[i] = table[i - 1];
                }
                _ => {
                    let i = 1 + case % (len - 1);
                    table[i] = (table[i - 1] + 1.0) / 2.0;
                }
            }
            assert!(AvoidingFunction::new(table.clone()).is_err(), "accepted {table:?}");
        }
    }
}
