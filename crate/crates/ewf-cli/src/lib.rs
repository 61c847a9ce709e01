//! Experiment-description frontend for the extended Wigner's-friend
//! toolkit: a line-oriented plan language, an engine dispatcher, and
//! CSV/JSON report emission. The `ewf` binary wires these to subcommands.

pub mod diag;
pub mod emit;
pub mod plan;
pub mod run;

pub use diag::{DiagCode, Diagnostic, Severity};
pub use plan::{parse_plan, serialize_plan, EngineChoice, ExperimentPlan, PlanEvent, StateKind};
pub use run::{run_plan, simulate_plan, RunReport};
