use alloc::string::String;

use thiserror::Error;

/// Construction and lookup errors for the domain types.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("truth degree {0} is outside [0, 1]")]
    InvalidDegree(f64),
    #[error("trace has no states")]
    EmptyTrace,
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),
    #[error("state {state} has {found} values, expected {expected}")]
    RaggedState {
        state: usize,
        expected: usize,
        found: usize,
    },
    #[error("loop start {loop_start} is out of range for {len} states")]
    LoopOutOfRange { loop_start: usize, len: usize },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("position {pos} is out of range for a finite trace of {len} states")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("invalid avoiding function: {0}")]
    InvalidEta(&'static str),
}
