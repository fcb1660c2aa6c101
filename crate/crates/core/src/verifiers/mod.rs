//! Hoeffding count thresholds, almost-sure verifiers and their
//! combinators, limiting verifiers and partition solvers.

mod build;
mod family;
mod run;
mod threshold;

pub use build::{
    check_pairing, conjoin, disjoin, limiting_verifier, solver, subbasic_verifier, verifier_for_open, whole_hypothesis,
    CantorPairing, Pairing,
};
pub use family::{Construction, Payload, Verdict, VerifierFamily};
pub use run::{run, run_path};
pub use threshold::{error_budget_partial_sum, hoeffding_threshold, t_n, Level, ThresholdSchedule};

pub(crate) use family::PathCounts;

#[cfg(test)]
mod tests;
