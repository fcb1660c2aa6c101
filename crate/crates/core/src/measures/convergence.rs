use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::event::Event;
use crate::measures::world::{is_feasible, prob, World};
use crate::rational::{from_f64, to_f64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventDeviation {
    pub event: String,
    /// Largest `|μ_k(A) − μ(A)|` over the tail of the sequence.
    pub max_tail_deviation: f64,
    pub within_tolerance: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakConvergenceReport {
    pub converged: bool,
    /// Index (0-based) of the first sequence entry counted as tail.
    pub tail_start: usize,
    pub events: Vec<EventDeviation>,
}

/// Checks `μ_k(A) → μ(A)` on a finite list of continuity sets of the limit.
///
/// The tail is the last quarter of the sequence (at least one entry);
/// deviations are computed exactly and compared strictly against `tol`.
pub fn weak_convergence_check(
    worlds: &[World],
    limit: &World,
    events: &[Event],
    tol: f64,
) -> Result<WeakConvergenceReport> {
    if worlds.is_empty() {
        return Err(Error::InvalidWorld("empty world sequence".into()));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidWorld("tolerance must be positive".into()));
    }
    let tol_exact = from_f64(tol)?;
    for e in events {
        if !is_feasible(limit, e)? {
            return Err(Error::NotContinuitySet(format!("{e} in {limit}")));
        }
    }
    let tail_start = worlds.len() - (worlds.len() / 4).max(1);
    let mut report = Vec::with_capacity(events.len());
    for e in events {
        let target = prob(limit, e)?;
        let mut worst = None;
        for w in &worlds[tail_start..] {
            let dev = (prob(w, e)? - &target).abs();
            if worst.as_ref().is_none_or(|cur| dev > *cur) {
                worst = Some(dev);
            }
        }
        let worst = worst.unwrap();
        report.push(EventDeviation {
            event: e.to_string(),
            max_tail_deviation: to_f64(&worst),
            within_tolerance: worst < tol_exact,
        });
    }
    Ok(WeakConvergenceReport { converged: report.iter().all(|d| d.within_tolerance), tail_start, events: report })
}
