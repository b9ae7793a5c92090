//! Exact certification of rank conditions on transfer matrices: admissible
//! sampling, rank trials, and construction of rank-deficient matrices.

mod counterexample;
mod network;
mod trials;

pub use counterexample::{construct_counterexample, lift_counterexample, CONSTRUCTION_ATTEMPTS};
pub use network::{NetworkMatrix, MINOR_AUDIT_MAX};
pub use trials::{
    rank_trials, sample_admissible, trial_rng, OracleReport, OracleVerdict, DEFAULT_TRIALS, SAMPLE_RANGE,
};
