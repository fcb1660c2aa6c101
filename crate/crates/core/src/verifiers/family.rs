use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypotheses::{Hypothesis, Partition};
use crate::measures::{require_feasible, Event, Points, SampleSpace, SampleVector, World};
use crate::verifiers::threshold::{Level, ThresholdSchedule};

/// What an `Accept` verdict asserts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Payload {
    /// The family's own target hypothesis.
    Target,
    /// Closed piece `C_j` of a limiting verifier (1-based).
    Piece(usize),
    /// Answer `i` of a solver's partition (1-based).
    Answer(usize),
}

/// `Continue` stands for the trivial conclusion W.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept(Payload),
    Continue,
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Continue => f.write_str("W"),
            Verdict::Accept(Payload::Target) => f.write_str("H"),
            Verdict::Accept(Payload::Piece(j)) => write!(f, "C{j}"),
            Verdict::Accept(Payload::Answer(i)) => write!(f, "A{i}"),
        }
    }
}

/// Construction tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Hoeffding,
    Conjunction,
    Disjunction,
    Limiting,
    Solver,
}

pub(crate) type Builder = dyn Fn(usize) -> Result<VerifierFamily> + Send + Sync;

/// Children built on first use and kept for later sample sizes.
pub(crate) struct LazyChildren {
    len: Option<usize>,
    build: Box<Builder>,
    built: RwLock<Vec<Arc<VerifierFamily>>>,
}

impl LazyChildren {
    pub(crate) fn new(len: Option<usize>, build: Box<Builder>) -> Self {
        LazyChildren { len, build, built: RwLock::new(Vec::new()) }
    }

    pub(crate) fn len(&self) -> Option<usize> {
        self.len
    }

    /// Child `i` (1-based).
    pub(crate) fn get(&self, i: usize) -> Result<Arc<VerifierFamily>> {
        if let Some(c) = self.built.read().expect("poisoned").get(i - 1) {
            return Ok(c.clone());
        }
        let mut built = self.built.write().expect("poisoned");
        while built.len() < i {
            let next = (self.build)(built.len() + 1)?;
            built.push(Arc::new(next));
        }
        Ok(built[i - 1].clone())
    }
}

pub(crate) struct SolverParts {
    pub partition: Partition,
    /// Per answer: the complement verifiers of its closed pieces.
    pub pieces: Vec<LazyChildren>,
    pub pairing: Arc<dyn super::build::Pairing>,
}

#[allow(clippy::large_enum_variant)] // leaves dominate; keep them inline
pub(crate) enum Kind {
    Hoeffding {
        event: Event,
        id: usize,
        schedule: ThresholdSchedule,
    },
    Conjunction(Arc<VerifierFamily>, Arc<VerifierFamily>),
    Disjunction(LazyChildren),
    /// Children verify the complements of the closed pieces.
    Limiting(LazyChildren),
    Solver(Box<SolverParts>),
}

/// A family `{λ_n}` of count-threshold tests.
pub struct VerifierFamily {
    pub(crate) space: Arc<SampleSpace>,
    pub(crate) target: Option<Hypothesis>,
    pub(crate) label: String,
    pub(crate) alpha: Level,
    pub(crate) kind: Kind,
}

impl fmt::Debug for VerifierFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VerifierFamily")
            .field("construction", &self.construction())
            .field("target", &self.label)
            .field("alpha", &self.alpha.to_string())
            .finish()
    }
}

impl VerifierFamily {
    pub fn construction(&self) -> Construction {
        match self.kind {
            Kind::Hoeffding { .. } => Construction::Hoeffding,
            Kind::Conjunction(..) => Construction::Conjunction,
            Kind::Disjunction(_) => Construction::Disjunction,
            Kind::Limiting(_) => Construction::Limiting,
            Kind::Solver(_) => Construction::Solver,
        }
    }

    pub fn alpha(&self) -> &Level {
        &self.alpha
    }

    pub fn space(&self) -> &Arc<SampleSpace> {
        &self.space
    }

    /// The hypothesis accepted by `Accept(Target)`, when it has a finite
    /// presentation.
    pub fn target(&self) -> Option<&Hypothesis> {
        self.target.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The hypothesis asserted by a payload.
    pub fn payload_hypothesis(&self, payload: Payload) -> Option<Hypothesis> {
        match (payload, &self.kind, &self.target) {
            (Payload::Target, _, t) => t.clone(),
            (Payload::Piece(j), Kind::Limiting(_), Some(Hypothesis::FSigma(f))) => Some(f.piece(j)),
            (Payload::Answer(i), Kind::Solver(s), _) => s.partition.answers().get(i.checked_sub(1)?).cloned(),
            _ => None,
        }
    }

    pub fn payload_label(&self, payload: Payload) -> String {
        match (payload, &self.kind) {
            (Payload::Answer(i), Kind::Solver(s)) => {
                s.partition.label(i).map_or_else(|| format!("answer {i}"), str::to_string)
            }
            (Payload::Piece(j), _) => format!("C{j}"),
            (Payload::Answer(i), _) => format!("answer {i}"),
            (Payload::Target, _) => self.label.clone(),
        }
    }

    /// `λ_n` on a sample of length `n`.
    pub fn test_at(&self, sample: &SampleVector) -> Result<Verdict> {
        if sample.space != self.space {
            return Err(Error::SpaceMismatch);
        }
        if sample.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut ctx = PathCounts::new(&sample.points, None);
        self.verdict(&mut ctx, sample.len())
    }

    pub(crate) fn verdict(&self, ctx: &mut PathCounts<'_>, n: usize) -> Result<Verdict> {
        let accept = Verdict::Accept(Payload::Target);
        match &self.kind {
            Kind::Hoeffding { event, id, schedule } => {
                let count = ctx.count(*id, event, n)?;
                Ok(if schedule.accepts(n as u64, count) { accept } else { Verdict::Continue })
            }
            Kind::Conjunction(a, b) => {
                let both = a.verdict(ctx, n)?.is_accept() && b.verdict(ctx, n)?.is_accept();
                Ok(if both { accept } else { Verdict::Continue })
            }
            Kind::Disjunction(children) => {
                let last = children.len().map_or(n, |len| len.min(n));
                for i in 1..=last {
                    if children.get(i)?.verdict(ctx, n)?.is_accept() {
                        return Ok(accept);
                    }
                }
                Ok(Verdict::Continue)
            }
            Kind::Limiting(children) => {
                let last = children.len().map_or(n, |len| len.min(n));
                for j in 1..=last {
                    if !children.get(j)?.verdict(ctx, n)?.is_accept() {
                        return Ok(Verdict::Accept(Payload::Piece(j)));
                    }
                }
                Ok(Verdict::Continue)
            }
            Kind::Solver(parts) => {
                for k in 1..=n {
                    let (i, j) = parts.pairing.unpair(k);
                    let Some(answer) = parts.pieces.get(i.wrapping_sub(1)) else { continue };
                    if answer.len().is_some_and(|len| j > len) {
                        continue;
                    }
                    if !answer.get(j)?.verdict(ctx, n)?.is_accept() {
                        return Ok(Verdict::Accept(Payload::Answer(i)));
                    }
                }
                Ok(Verdict::Continue)
            }
        }
    }
}

/// Interns events so evaluation contexts can index count vectors.
pub(crate) fn intern(event: &Event) -> usize {
    static TABLE: OnceLock<Mutex<HashMap<Event, usize>>> = OnceLock::new();
    let mut table = TABLE.get_or_init(Default::default).lock().expect("poisoned");
    let next = table.len();
    *table.entry(event.clone()).or_insert(next)
}

/// Prefix counts of one sample path, computed per event on first use.
pub(crate) struct PathCounts<'a> {
    points: &'a Points,
    world: Option<&'a World>,
    counts: Vec<Option<Vec<u32>>>,
}

impl<'a> PathCounts<'a> {
    /// With a world, each event is checked for feasibility on first use.
    pub(crate) fn new(points: &'a Points, world: Option<&'a World>) -> Self {
        PathCounts { points, world, counts: Vec::new() }
    }

    fn count(&mut self, id: usize, event: &Event, n: usize) -> Result<u64> {
        if self.counts.len() <= id {
            self.counts.resize(id + 1, None);
        }
        if self.counts[id].is_none() {
            if let Some(w) = self.world {
                require_feasible(w, event)?;
            }
            self.counts[id] = Some(self.points.prefix_counts(event));
        }
        Ok(self.counts[id].as_ref().expect("filled")[n] as u64)
    }
}
