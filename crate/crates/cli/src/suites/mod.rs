//! Randomized property suites.
//!
//! Each suite checks a list of named laws over generated cases and reports,
//! per law, the number of checks and the first counterexample (lowest case
//! index). Cases run in parallel; results merge in case order, so a report
//! depends only on the seed and the case count.

use std::fmt;

use ftl_core::{AvoidingFunction, Interpretation, Trace};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::gen::case_rng;
use crate::trace_file;

pub mod algebra;
pub mod chains;
pub mod crisp;
pub mod oracle;
pub mod rewrites;

/// Tolerance of every numeric law unless stated otherwise.
pub const TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub case: u64,
    pub interp: Option<Interpretation>,
    pub pos: Option<usize>,
    pub trace: Option<String>,
    pub eta: Option<Vec<f64>>,
    pub formula: String,
    pub lhs: f64,
    pub rhs: f64,
    pub note: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "case {}", self.case)?;
        if let Some(i) = self.interp {
            write!(f, ", {i}")?;
        }
        if let Some(p) = self.pos {
            write!(f, ", position {p}")?;
        }
        if !self.formula.is_empty() {
            write!(f, ", formula `{}`", self.formula)?;
        }
        write!(f, ": {} vs {}", self.lhs, self.rhs)?;
        if !self.note.is_empty() {
            write!(f, " ({})", self.note)?;
        }
        if let Some(eta) = &self.eta {
            write!(f, "; eta {eta:?}")?;
        }
        if let Some(t) = &self.trace {
            write!(f, "; trace {t}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LawResult {
    pub name: String,
    pub checks: u64,
    pub failure: Option<Counterexample>,
}

impl LawResult {
    /// Violated, or never exercised.
    pub fn failed(&self) -> bool {
        self.failure.is_some() || self.checks == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub laws: Vec<LawResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        !self.laws.iter().any(LawResult::failed)
    }

    pub fn law(&self, name: &str) -> Option<&LawResult> {
        self.laws.iter().find(|l| l.name == name)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for law in &self.laws {
            let status = if law.failed() { "FAIL" } else { "PASS" };
            write!(f, "{status} {}/{} ({} checks)", self.suite, law.name, law.checks)?;
            match &law.failure {
                Some(cx) => writeln!(f, ": {cx}")?,
                None if law.checks == 0 => writeln!(f, ": never exercised")?,
                None => writeln!(f)?,
            }
        }
        Ok(())
    }
}

/// Per-case law bookkeeping.
#[derive(Default, Debug)]
pub struct Tally {
    laws: Vec<LawResult>,
}

impl Tally {
    fn slot(&mut self, name: &str) -> &mut LawResult {
        let idx = match self.laws.iter().position(|l| l.name == name) {
            Some(idx) => idx,
            None => {
                self.laws.push(LawResult {
                    name: name.to_string(),
                    checks: 0,
                    failure: None,
                });
                self.laws.len() - 1
            }
        };
        &mut self.laws[idx]
    }

    /// Registers `name` without checking anything.
    pub fn declare(&mut self, name: &str) {
        self.slot(name);
    }

    pub fn record(&mut self, name: &str, ok: bool, cx: impl FnOnce() -> Counterexample) {
        let slot = self.slot(name);
        slot.checks += 1;
        if !ok && slot.failure.is_none() {
            slot.failure = Some(cx());
        }
    }

    fn absorb(&mut self, other: Tally) {
        for law in other.laws {
            let slot = self.slot(&law.name);
            slot.checks += law.checks;
            if slot.failure.is_none() {
                slot.failure = law.failure;
            }
        }
    }

    pub fn into_report(self, suite: &'static str) -> SuiteReport {
        SuiteReport {
            suite,
            laws: self.laws,
        }
    }
}

/// Runs `case` for indices `0..cases` in parallel and merges the tallies.
pub fn run_cases<F>(seed: u64, cases: u64, case: F) -> Tally
where
    F: Fn(u64, &mut ChaCha8Rng, &mut Tally) + Sync,
{
    let tallies: Vec<Tally> = (0..cases)
        .into_par_iter()
        .map(|idx| {
            let mut rng = case_rng(seed, idx);
            let mut tally = Tally::default();
            case(idx, &mut rng, &mut tally);
            tally
        })
        .collect();
    let mut all = Tally::default();
    for t in tallies {
        all.absorb(t);
    }
    all
}

/// The fixed parts of a counterexample.
#[derive(Clone, Copy)]
pub struct Scene<'a> {
    pub case: u64,
    pub trace: &'a Trace,
    pub eta: &'a AvoidingFunction,
    pub interp: Interpretation,
}

impl Scene<'_> {
    pub fn cx(&self, pos: usize, formula: String, lhs: f64, rhs: f64, note: &str) -> Counterexample {
        Counterexample {
            case: self.case,
            interp: Some(self.interp),
            pos: Some(pos),
            trace: Some(trace_file::to_json(self.trace)),
            eta: Some(self.eta.table().to_vec()),
            formula,
            lhs,
            rhs,
            note: note.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Chains,
    Oracle,
    Crisp,
    Rewrites,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Algebra,
        Suite::Chains,
        Suite::Oracle,
        Suite::Crisp,
        Suite::Rewrites,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Chains => "chains",
            Suite::Oracle => "oracle",
            Suite::Crisp => "crisp",
            Suite::Rewrites => "rewrites",
        }
    }

    pub fn from_name(name: &str) -> Option<Vec<Suite>> {
        if name == "all" {
            return Some(Suite::ALL.to_vec());
        }
        Suite::ALL.iter().find(|s| s.name() == name).map(|s| vec![*s])
    }

    pub fn run(self, seed: u64, cases: u64) -> SuiteReport {
        match self {
            Suite::Algebra => algebra::run(),
            Suite::Chains => chains::run(seed, cases),
            Suite::Oracle => oracle::run(seed, cases),
            Suite::Crisp => crisp::run(seed, cases),
            Suite::Rewrites => rewrites::run(seed, cases),
        }
    }
}
