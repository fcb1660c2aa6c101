//! Statistical verifiers over the weak topology on probability measures.
//!
//! - [`measures`]: sample spaces, events, worlds, sampling
//! - [`hypotheses`]: hypothesis ASTs with an exact membership oracle
//! - [`verifiers`]: Hoeffding tests, combinators, limiting verifiers, solvers
//! - [`propositional`]: the same constructions on binary sequences
//! - [`montecarlo`]: the trial harness

pub mod error;
pub mod hypotheses;
pub mod measures;
pub mod montecarlo;
pub mod propositional;
pub mod rational;
pub mod verifiers;

pub use error::{Error, Result};
pub use hypotheses::{band_as_intersection, contains, FSigma, Hypothesis, Membership, Partition};
pub use measures::{
    empirical_count, is_feasible, prob, sample, sample_trial, weak_convergence_check, Atom, DensityPiece, Event,
    Points, SampleSpace, SampleVector, World,
};
pub use montecarlo::{certify, run_trials, AcceptTarget, Claim, ClaimOutcome, TrialPlan, TrialReport};
pub use rational::Rational;
pub use verifiers::{
    conjoin, disjoin, hoeffding_threshold, limiting_verifier, run, solver, subbasic_verifier, verifier_for_open,
    CantorPairing, Level, Payload, Verdict, VerifierFamily,
};
