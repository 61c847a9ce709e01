//! Engines and consistency checkers for extended Wigner's-friend
//! experiments.
//!
//! Three prediction engines cover the two-round pair experiment on a
//! singlet, measured, undone and re-measured:
//!
//! - [`quantum`] — Born-rule baselines: the singlet correlator, the
//!   three-particle perfect correlations, the coin–electron tables, and the
//!   fresh-singlet correlator assignment that violates the CHSH bound;
//! - [`pilotwave`] — the position-based conditional chain built from
//!   closed-form disk areas, which keeps all four cross correlators inside
//!   the CHSH bound while matching the Born rule wherever the pairs are
//!   jointly measurable;
//! - [`collapse`] — the irreversible-collapse chain, where undoing is a
//!   no-op and second-round correlators are damped by the sector cosines.
//!
//! [`checkers`] verifies the structural claims (joint feasibility, parity
//! counting, certainty-chain logic, event-order measurability) and
//! [`montecarlo`] replays any engine as a seeded, reproducible sampler.

pub mod checkers;
pub mod collapse;
pub mod model;
pub mod montecarlo;
pub mod pilotwave;
pub mod quantum;
pub mod report;

pub use model::{
    labels, wrap_angle, Angle, CorrelatorSet, Error, JointTable, OutcomeTuple, Result, Settings,
    Sign,
};
pub use report::{AuditReport, Finding, FindingStatus};
