use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::{CoreError, TruthDegree};

/// A linear time structure: a finite sequence of states, or a lasso
/// `states[..loop_start] · states[loop_start..]^ω` when `loop_start` is set.
///
/// Each state assigns one truth degree to every atom, in the order of
/// [`Trace::atoms`].
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    atoms: Vec<String>,
    states: Vec<Vec<TruthDegree>>,
    loop_start: Option<usize>,
}

impl Trace {
    pub fn new(
        atoms: Vec<String>,
        states: Vec<Vec<f64>>,
        loop_start: Option<usize>,
    ) -> Result<Self, CoreError> {
        let states = states
            .into_iter()
            .map(|row| row.into_iter().map(TruthDegree::new).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        Self::from_degrees(atoms, states, loop_start)
    }

    pub fn from_degrees(
        atoms: Vec<String>,
        states: Vec<Vec<TruthDegree>>,
        loop_start: Option<usize>,
    ) -> Result<Self, CoreError> {
        if states.is_empty() {
            return Err(CoreError::EmptyTrace);
        }
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].contains(a) {
                return Err(CoreError::DuplicateAtom(a.clone()));
            }
        }
        for (state, row) in states.iter().enumerate() {
            if row.len() != atoms.len() {
                return Err(CoreError::RaggedState {
                    state,
                    expected: atoms.len(),
                    found: row.len(),
                });
            }
        }
        if let Some(loop_start) = loop_start {
            if loop_start >= states.len() {
                return Err(CoreError::LoopOutOfRange {
                    loop_start,
                    len: states.len(),
                });
            }
        }
        Ok(Trace {
            atoms,
            states,
            loop_start,
        })
    }

    /// A trace over a single atom, handy for tests and examples.
    pub fn single(atom: &str, values: &[f64], loop_start: Option<usize>) -> Result<Self, CoreError> {
        Trace::new(
            alloc::vec![atom.to_string()],
            values.iter().map(|&v| alloc::vec![v]).collect(),
            loop_start,
        )
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn states(&self) -> &[Vec<TruthDegree>] {
        &self.states
    }

    pub fn loop_start(&self) -> Option<usize> {
        self.loop_start
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn is_lasso(&self) -> bool {
        self.loop_start.is_some()
    }

    /// Number of states in the repeating part; 0 for finite traces.
    pub fn loop_len(&self) -> usize {
        self.loop_start.map_or(0, |s| self.states.len() - s)
    }

    /// Maps a path position to a state index. Lasso positions past the end
    /// wrap into the loop; finite positions past the end have no state.
    pub fn resolve(&self, pos: usize) -> Option<usize> {
        let len = self.states.len();
        if pos < len {
            return Some(pos);
        }
        let start = self.loop_start?;
        Some(start + (pos - start) % (len - start))
    }

    pub fn atom_index(&self, atom: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == atom)
    }

    pub fn at(&self, pos: usize, atom: &str) -> Result<TruthDegree, CoreError> {
        let a = self
            .atom_index(atom)
            .ok_or_else(|| CoreError::UnknownAtom(atom.to_string()))?;
        let idx = self.resolve(pos).ok_or(CoreError::PositionOutOfRange {
            pos,
            len: self.states.len(),
        })?;
        Ok(self.states[idx][a])
    }

    pub(crate) fn value(&self, state: usize, atom: usize) -> f64 {
        self.states[state][atom].value()
    }

    /// True when every label is 0 or 1.
    pub fn is_crisp(&self) -> bool {
        self.states.iter().flatten().all(|d| d.is_crisp())
    }
}

/// The degree of `atom` at path position `pos`.
pub fn trace_at(trace: &Trace, pos: usize, atom: &str) -> Result<TruthDegree, CoreError> {
    trace.at(pos, atom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn finite_lookup() {
        let t = Trace::single("p", &[0.1, 0.2, 1.0, 0.1], None).unwrap();
        assert_eq!(trace_at(&t, 2, "p").unwrap().value(), 1.0);
        assert_eq!(
            trace_at(&t, 5, "p"),
            Err(CoreError::PositionOutOfRange { pos: 5, len: 4 })
        );
        assert_eq!(
            trace_at(&t, 0, "q"),
            Err(CoreError::UnknownAtom("q".into()))
        );
    }

    #[test]
    fn lasso_wraps() {
        let t = Trace::single("p", &[0.9, 0.5, 0.7], Some(1)).unwrap();
        assert_eq!(trace_at(&t, 4, "p").unwrap().value(), 0.7);
        assert_eq!(trace_at(&t, 3, "p").unwrap().value(), 0.5);
        assert_eq!(t.loop_len(), 2);
        for pos in 1..40 {
            assert_eq!(t.at(pos, "p"), t.at(pos + 2, "p"));
        }
    }

    #[test]
    fn construction_errors() {
        let atoms = vec!["p".to_string(), "q".to_string()];
        assert!(matches!(
            Trace::new(atoms.clone(), vec![vec![0.1, 0.2], vec![0.3]], None),
            Err(CoreError::RaggedState { state: 1, .. })
        ));
        assert!(matches!(
            Trace::new(atoms.clone(), vec![vec![0.1, 1.2]], None),
            Err(CoreError::InvalidDegree(_))
        ));
        assert!(matches!(
            Trace::new(atoms.clone(), vec![vec![0.1, 0.2]], Some(1)),
            Err(CoreError::LoopOutOfRange { .. })
        ));
        assert!(matches!(
            Trace::new(atoms, vec![], None),
            Err(CoreError::EmptyTrace)
        ));
        assert!(matches!(
            Trace::new(vec!["p".into(), "p".into()], vec![vec![0.0, 0.0]], None),
            Err(CoreError::DuplicateAtom(_))
        ));
    }
}
