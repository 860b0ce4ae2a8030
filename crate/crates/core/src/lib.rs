//! Follow-the-regularised-leader policies for adversarial multi-armed
//! bandits, the loss sequences used to stress them, and a reproducible
//! experiment harness.
//!
//! The policy catalogue covers fixed-rate Exp3, INF (½-Tsallis) and
//! log-barrier FTRL; the hybrid Tsallis/log-barrier INF with a
//! data-dependent learning rate on a round-dependent chopped simplex
//! (anytime and known-horizon); INF with decaying forced exploration; and a
//! greedy policy that explores on a sparse random set of rounds.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod environments;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod policies;
pub mod potentials;
pub mod rng;
pub mod schedules;
pub mod solver;
pub mod types;

pub use environments::{Environment, EnvironmentConfig};
pub use error::{Error, Result};
pub use harness::{ExperimentConfig, ExperimentSummary};
pub use policies::{Policy, PolicyConfig};

pub use potentials::{DualMapTwoArm, Potential};
pub use solver::{FtrlProblem, KktCertificate};
pub use types::{
    EstimateVector, LossVector, ProbabilityVector, RoundRecord, RunDiagnostics, RunRecord,
};
