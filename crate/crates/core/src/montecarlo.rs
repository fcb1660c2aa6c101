//! Seeded, parallel trial harness measuring acceptance frequencies.

use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypotheses::{contains, Membership};
use crate::measures::{draw_points, World};
use crate::verifiers::{Construction, PathCounts, Payload, Verdict, VerifierFamily};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// Which verdicts count as acceptance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AcceptTarget {
    Any,
    Payload(Payload),
}

impl AcceptTarget {
    pub fn matches(&self, v: &Verdict) -> bool {
        match (self, v) {
            (_, Verdict::Continue) => false,
            (AcceptTarget::Any, Verdict::Accept(_)) => true,
            (AcceptTarget::Payload(p), Verdict::Accept(q)) => p == q,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrialPlan {
    pub verifier: Arc<VerifierFamily>,
    pub world: World,
    pub n_max: usize,
    pub trials: u64,
    pub master_seed: u64,
    pub accept: AcceptTarget,
    /// Rate defining `convergence_n`.
    pub convergence_target: f64,
}

impl TrialPlan {
    pub fn new(verifier: Arc<VerifierFamily>, world: World, n_max: usize, trials: u64, master_seed: u64) -> Self {
        TrialPlan { verifier, world, n_max, trials, master_seed, accept: AcceptTarget::Any, convergence_target: 0.95 }
    }

    pub fn accepting(mut self, accept: AcceptTarget) -> Self {
        self.accept = accept;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 || self.n_max == 0 {
            return Err(Error::InvalidPlan("trials and n_max must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.convergence_target) {
            return Err(Error::InvalidPlan("convergence target must lie in [0,1]".into()));
        }
        if self.world.space() != self.verifier.space() {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    /// First sample size of the final quarter of the horizon.
    pub fn final_quarter_start(&self) -> usize {
        self.n_max - (self.n_max / 4).max(1) + 1
    }
}

/// Integer tallies over a set of trials; merging is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tally {
    pub accepts: Vec<u64>,
    pub eventual: u64,
    pub trials: u64,
}

impl Tally {
    pub fn empty(n_max: usize) -> Self {
        Tally { accepts: vec![0; n_max], eventual: 0, trials: 0 }
    }

    pub fn merge(mut self, other: &Tally) -> Self {
        assert_eq!(self.accepts.len(), other.accepts.len(), "horizons differ");
        for (a, b) in self.accepts.iter_mut().zip(&other.accepts) {
            *a += b;
        }
        self.eventual += other.eventual;
        self.trials += other.trials;
        self
    }
}

fn run_one(plan: &TrialPlan, trial: u64, tally: &mut Tally) -> Result<()> {
    let points = draw_points(&plan.world, plan.n_max, plan.master_seed, trial);
    let mut ctx = PathCounts::new(&points, Some(&plan.world));
    let tail = plan.final_quarter_start();
    let mut eventual = true;
    for n in 1..=plan.n_max {
        let hit = plan.accept.matches(&plan.verifier.verdict(&mut ctx, n)?);
        if hit {
            tally.accepts[n - 1] += 1;
        } else if n >= tail {
            eventual = false;
        }
    }
    tally.eventual += eventual as u64;
    tally.trials += 1;
    Ok(())
}

/// Tallies the given trial indices, in parallel.
pub fn run_tally(plan: &TrialPlan, trials: &[u64]) -> Result<Tally> {
    plan.validate()?;
    trials
        .par_iter()
        .try_fold(
            || Tally::empty(plan.n_max),
            |mut t, &i| {
                run_one(plan, i, &mut t)?;
                Ok(t)
            },
        )
        .try_reduce(|| Tally::empty(plan.n_max), |a, b| Ok(a.merge(&b)))
}

/// Tallies trials `range.start..range.end`.
pub fn run_range(plan: &TrialPlan, range: Range<u64>) -> Result<Tally> {
    run_tally(plan, &range.collect::<Vec<_>>())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub verifier: String,
    pub construction: Construction,
    pub world: String,
    pub alpha: String,
    pub n_max: usize,
    pub trials: u64,
    pub master_seed: u64,
    pub accept: AcceptTarget,
    pub accept_counts: Vec<u64>,
    pub accept_rate: Vec<f64>,
    pub ci_low: Vec<f64>,
    pub ci_high: Vec<f64>,
    /// Running sum of `accept_rate` up to each `n`.
    pub cum_error: Vec<f64>,
    pub final_quarter_start: usize,
    pub eventual_count: u64,
    pub eventual_rate: f64,
    pub convergence_target: f64,
    pub convergence_n: Option<usize>,
    /// Membership of the world in the accepted hypothesis.
    pub ground_truth: Membership,
}

impl TrialReport {
    pub fn from_tally(plan: &TrialPlan, tally: &Tally) -> Result<Self> {
        let t = tally.trials;
        if t == 0 {
            return Err(Error::InvalidPlan("no trials tallied".into()));
        }
        let accept_rate: Vec<f64> = tally.accepts.iter().map(|&a| a as f64 / t as f64).collect();
        let (ci_low, ci_high) = tally.accepts.iter().map(|&a| wilson_interval(a, t, Z95)).unzip();
        let cum_error = accept_rate
            .iter()
            .scan(0.0, |acc, r| {
                *acc += r;
                Some(*acc)
            })
            .collect();
        let convergence_n = accept_rate.iter().position(|&r| r >= plan.convergence_target).map(|i| i + 1);
        Ok(TrialReport {
            verifier: plan.verifier.label().to_string(),
            construction: plan.verifier.construction(),
            world: plan.world.to_string(),
            alpha: plan.verifier.alpha().to_string(),
            n_max: plan.n_max,
            trials: t,
            master_seed: plan.master_seed,
            accept: plan.accept,
            accept_counts: tally.accepts.clone(),
            accept_rate,
            ci_low,
            ci_high,
            cum_error,
            final_quarter_start: plan.final_quarter_start(),
            eventual_count: tally.eventual,
            eventual_rate: tally.eventual as f64 / t as f64,
            convergence_target: plan.convergence_target,
            convergence_n,
            ground_truth: ground_truth(plan)?,
        })
    }

    /// `Σ_n accept_rate[n]` over the whole horizon.
    pub fn total_cum_error(&self) -> f64 {
        self.cum_error.last().copied().unwrap_or(0.0)
    }
}

/// Membership of the plan's world in the hypothesis its acceptances assert.
fn ground_truth(plan: &TrialPlan) -> Result<Membership> {
    let h = match plan.accept {
        AcceptTarget::Any => plan.verifier.target().cloned(),
        AcceptTarget::Payload(p) => plan.verifier.payload_hypothesis(p),
    };
    match h {
        Some(h) => contains(&h, &plan.world, plan.n_max),
        None => Ok(Membership::Unknown),
    }
}

/// Runs trials `0..plan.trials` and summarizes them.
pub fn run_trials(plan: &TrialPlan) -> Result<TrialReport> {
    let tally = run_range(plan, 0..plan.trials)?;
    TrialReport::from_tally(plan, &tally)
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Claim {
    /// `cum_error ≤ α + 3·sqrt(α/trials)`; the world must lie outside.
    Sv3Bound { alpha: f64 },
    /// `eventual_rate ≥ target`; the world must lie inside.
    Sv4Eventual { target: f64 },
    /// `convergence_n ≤ horizon`; the world must lie inside.
    Convergence { horizon: usize },
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Sv3Bound { alpha } => write!(f, "sv3-bound(alpha={alpha})"),
            Claim::Sv4Eventual { target } => write!(f, "sv4-eventual(target={target})"),
            Claim::Convergence { horizon } => write!(f, "convergence(horizon={horizon})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimOutcome {
    pub claim: Claim,
    pub passed: bool,
    pub measured: f64,
    pub bound: f64,
    /// Positive when the claim holds with room to spare.
    pub margin: f64,
}

/// Checks claims against a report.
pub fn certify(report: &TrialReport, claims: &[Claim]) -> Result<Vec<ClaimOutcome>> {
    claims
        .iter()
        .map(|claim| {
            let expected_inside = !matches!(claim, Claim::Sv3Bound { .. });
            let contradicts = match report.ground_truth {
                Membership::In => !expected_inside,
                Membership::Out => expected_inside,
                Membership::Unknown => false,
            };
            if contradicts {
                return Err(Error::ClaimMismatch(format!(
                    "{claim:?} on {} which is {:?} the hypothesis",
                    report.world, report.ground_truth
                )));
            }
            let (measured, bound, margin) = match *claim {
                Claim::Sv3Bound { alpha } => {
                    let bound = alpha + 3.0 * (alpha.max(0.0) / report.trials as f64).sqrt();
                    let m = report.total_cum_error();
                    (m, bound, bound - m)
                }
                Claim::Sv4Eventual { target } => (report.eventual_rate, target, report.eventual_rate - target),
                Claim::Convergence { horizon } => {
                    let m = report.convergence_n.map_or(f64::INFINITY, |n| n as f64);
                    (m, horizon as f64, horizon as f64 - m)
                }
            };
            Ok(ClaimOutcome { claim: claim.clone(), passed: margin >= 0.0, measured, bound, margin })
        })
        .collect()
}
