//! Front end for fuzzy-time temporal logic: trace files, η specifications,
//! random generators, property suites and the `ftl` subcommands.

pub mod commands;
pub mod demo;
pub mod eta_spec;
pub mod gen;
pub mod suites;
pub mod trace_file;

/// Default node budget of adequate-set lowering.
pub const DEFAULT_BUDGET: usize = 100_000;
