//! Mechanical verification of the consistency arguments: joint-distribution
//! feasibility, parity enumeration, the certainty-chain audit, and the
//! event-order measurability census.

pub mod fine;
pub mod frlogic;
pub mod parity;
pub mod timeorder;

pub use fine::{
    chsh_family_satisfied, chsh_variants, joint_exists, max_chsh_variant, pair_feasibility,
    FeasibilityResult, FEAS_TOL,
};
pub use frlogic::{
    certainty_chain_premises, fr_logic_contradiction, is_contradiction, premises_from_table,
    FrVariable, Implication, PossibilityStatement, PremiseSet,
};
pub use parity::{count_satisfying, ghz_constraints, ghz_parity_satisfiable, ParityConstraint};
pub use timeorder::{
    both_measurable_graph, order_census, time_order_audit, OrderCensus, PrecedenceGraph,
};
