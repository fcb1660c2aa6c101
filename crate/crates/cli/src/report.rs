//! Report types and their CSV/JSON renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use weakverify::measures::WeakConvergenceReport;
use weakverify::{ClaimOutcome, Membership, TrialReport};

use crate::config::Experiment;

pub const TRIAL_HEADER: &str = "n,accept_rate,ci_low,ci_high,cum_error";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRun {
    pub world: String,
    pub report: TrialReport,
    pub claims: Vec<ClaimOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropStage {
    pub stage: usize,
    pub prefix: String,
    pub conclusion: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityOutcome {
    pub to: String,
    pub from_stage: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropRun {
    pub world: String,
    pub method: String,
    pub stages: Vec<PropStage>,
    pub claims: Vec<StabilityOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Results {
    Trials { runs: Vec<TrialRun> },
    Prop { runs: Vec<PropRun> },
    WeakConvergence { report: WeakConvergenceReport, claimed: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub experiment: Experiment,
    pub seed: u64,
    pub results: Results,
}

impl RunReport {
    /// Every stated claim holds.
    pub fn passed(&self) -> bool {
        match &self.results {
            Results::Trials { runs } => runs.iter().flat_map(|r| &r.claims).all(|c| c.passed),
            Results::Prop { runs } => runs.iter().flat_map(|r| &r.claims).all(|c| c.passed),
            Results::WeakConvergence { report, claimed } => !claimed || report.converged,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// One CSV table per world (a single table for weak convergence).
    pub fn to_csv_tables(&self) -> Vec<String> {
        match &self.results {
            Results::Trials { runs } => runs.iter().map(|r| trial_csv(&r.report)).collect(),
            Results::Prop { runs } => runs
                .iter()
                .map(|r| {
                    let mut s = String::from("stage,prefix,conclusion\n");
                    for st in &r.stages {
                        writeln!(s, "{},{},{}", st.stage, st.prefix, st.conclusion).unwrap();
                    }
                    s
                })
                .collect(),
            Results::WeakConvergence { report, .. } => {
                let mut s = String::from("event,max_tail_deviation,within_tolerance\n");
                for e in &report.events {
                    writeln!(s, "\"{}\",{},{}", e.event, e.max_tail_deviation, e.within_tolerance).unwrap();
                }
                vec![s]
            }
        }
    }

    /// Human-readable summary lines.
    pub fn summary(&self) -> Vec<String> {
        let mark = |ok: bool| if ok { "PASS" } else { "FAIL" };
        let mut out = Vec::new();
        match &self.results {
            Results::Trials { runs } => {
                for r in runs {
                    let rep = &r.report;
                    let mut line = format!(
                        "{}: final accept_rate {:.4}, eventual_rate {:.4}, truth {:?}",
                        r.world,
                        rep.accept_rate.last().copied().unwrap_or(0.0),
                        rep.eventual_rate,
                        rep.ground_truth,
                    );
                    if rep.ground_truth != Membership::In {
                        line += &format!(", cum_error {:.6}", rep.total_cum_error());
                    }
                    out.push(line);
                    for c in &r.claims {
                        out.push(format!(
                            "  [{}] {}: measured {} vs bound {}",
                            mark(c.passed),
                            c.claim,
                            c.measured,
                            c.bound
                        ));
                    }
                }
            }
            Results::Prop { runs } => {
                for r in runs {
                    let last = r.stages.last().map_or("", |s| s.conclusion.as_str());
                    out.push(format!("{} under {}: final conclusion {last}", r.world, r.method));
                    for c in &r.claims {
                        out.push(format!("  [{}] stabilizes to {} from stage {}", mark(c.passed), c.to, c.from_stage));
                    }
                }
            }
            Results::WeakConvergence { report, claimed } => {
                out.push(format!("converged: {} (tail from index {})", report.converged, report.tail_start));
                if *claimed {
                    out.push(format!("  [{}] converges", mark(report.converged)));
                }
            }
        }
        out
    }
}

pub fn trial_csv(r: &TrialReport) -> String {
    let mut s = String::with_capacity(r.n_max * 48);
    s.push_str(TRIAL_HEADER);
    s.push('\n');
    for i in 0..r.n_max {
        writeln!(s, "{},{},{},{},{}", i + 1, r.accept_rate[i], r.ci_low[i], r.ci_high[i], r.cum_error[i]).unwrap();
    }
    s
}
