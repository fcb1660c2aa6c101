//! Hypotheses are sets of worlds built from the sub-basis `{μ : μ(A) > b}`.
//!
//! Open hypotheses are finite Boolean combinations of sub-basic and band
//! sets; closed hypotheses are complements of open ones; Fσ hypotheses are
//! enumerated unions of closed pieces. Membership is decided exactly for the
//! open and closed fragments and semi-decided for Fσ unions.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::require_feasible;
use crate::measures::{prob, Event, SampleSpace, World};
use crate::rational::{in_unit_interval, show, Rational};

#[derive(Clone)]
pub enum Hypothesis {
    /// `{μ : μ(event) > threshold}`.
    SubBasic {
        event: Event,
        threshold: Rational,
    },
    /// `{μ : lower < μ(event) < upper}`.
    Band {
        event: Event,
        lower: Rational,
        upper: Rational,
    },
    And(Vec<Hypothesis>),
    Or(Vec<Hypothesis>),
    /// Complement of an open-form hypothesis.
    ClosedComplement(Box<Hypothesis>),
    FSigma(FSigma),
}

type PieceFn = dyn Fn(usize) -> Hypothesis + Send + Sync;

/// A countable union of closed pieces `C_1, C_2, …`.
///
/// Enumerated presentations are total; a finite presentation answers every
/// index past its end with its last piece, and reports its length so scans
/// can stop there.
#[derive(Clone)]
pub struct FSigma {
    name: String,
    len: Option<usize>,
    pieces: Arc<PieceFn>,
}

impl FSigma {
    pub fn finite(name: impl Into<String>, pieces: Vec<Hypothesis>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidHypothesis("an Fσ presentation needs a piece".into()));
        }
        for p in &pieces {
            ensure_closed_piece(p)?;
        }
        let len = pieces.len();
        let pieces = Arc::new(pieces);
        Ok(FSigma { name: name.into(), len: Some(len), pieces: Arc::new(move |i| pieces[i.clamp(1, len) - 1].clone()) })
    }

    /// An infinite presentation `i ↦ C_i` (indices start at 1). The first few
    /// pieces are checked eagerly.
    pub fn enumerated(
        name: impl Into<String>,
        pieces: impl Fn(usize) -> Hypothesis + Send + Sync + 'static,
    ) -> Result<Self> {
        for i in 1..=3 {
            ensure_closed_piece(&pieces(i))?;
        }
        Ok(FSigma { name: name.into(), len: None, pieces: Arc::new(pieces) })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of distinct pieces, `None` when infinite.
    pub fn distinct_len(&self) -> Option<usize> {
        self.len
    }

    pub fn piece(&self, index: usize) -> Hypothesis {
        (self.pieces)(index.max(1))
    }
}

fn ensure_closed_piece(h: &Hypothesis) -> Result<()> {
    match h {
        Hypothesis::ClosedComplement(_) => Ok(()),
        other => Err(Error::InvalidHypothesis(format!("Fσ piece `{other}` is not closed"))),
    }
}

impl Hypothesis {
    pub fn sub_basic(event: Event, threshold: Rational) -> Result<Self> {
        if !in_unit_interval(&threshold) {
            return Err(Error::InvalidHypothesis(format!("threshold {} is outside [0,1]", show(&threshold))));
        }
        Ok(Hypothesis::SubBasic { event, threshold })
    }

    pub fn band(event: Event, lower: Rational, upper: Rational) -> Result<Self> {
        if lower >= upper {
            return Err(Error::InvalidHypothesis("band needs lower < upper".into()));
        }
        if !in_unit_interval(&lower) || !in_unit_interval(&upper) {
            return Err(Error::InvalidHypothesis("band limits must lie in [0,1]".into()));
        }
        Ok(Hypothesis::Band { event, lower, upper })
    }

    pub fn and(children: Vec<Hypothesis>) -> Result<Self> {
        if children.is_empty() {
            return Err(Error::InvalidHypothesis("empty conjunction".into()));
        }
        Ok(Hypothesis::And(children))
    }

    pub fn or(children: Vec<Hypothesis>) -> Result<Self> {
        if children.is_empty() {
            return Err(Error::InvalidHypothesis("empty disjunction".into()));
        }
        Ok(Hypothesis::Or(children))
    }

    pub fn closed_complement(open: Hypothesis) -> Result<Self> {
        if !open.is_open_form() {
            return Err(Error::InvalidHypothesis(format!("`{open}` is not in open form")));
        }
        Ok(Hypothesis::ClosedComplement(Box::new(open)))
    }

    /// Built only from sub-basic, band, and finite And/Or nodes.
    pub fn is_open_form(&self) -> bool {
        match self {
            Hypothesis::SubBasic { .. } | Hypothesis::Band { .. } => true,
            Hypothesis::And(c) | Hypothesis::Or(c) => c.iter().all(Hypothesis::is_open_form),
            Hypothesis::ClosedComplement(_) | Hypothesis::FSigma(_) => false,
        }
    }

    /// Checks the structural invariants recursively.
    pub fn validate(&self) -> Result<()> {
        match self {
            Hypothesis::SubBasic { event, threshold } => Self::sub_basic(event.clone(), threshold.clone()).map(drop),
            Hypothesis::Band { event, lower, upper } => {
                Self::band(event.clone(), lower.clone(), upper.clone()).map(drop)
            }
            Hypothesis::And(c) | Hypothesis::Or(c) => {
                if c.is_empty() {
                    return Err(Error::InvalidHypothesis("empty And/Or".into()));
                }
                c.iter().try_for_each(Hypothesis::validate)
            }
            Hypothesis::ClosedComplement(open) => {
                if !open.is_open_form() {
                    return Err(Error::InvalidHypothesis("nested complement".into()));
                }
                open.validate()
            }
            Hypothesis::FSigma(f) => ensure_closed_piece(&f.piece(1)),
        }
    }

    /// The sample space of the events mentioned.
    pub fn space(&self) -> Arc<SampleSpace> {
        match self {
            Hypothesis::SubBasic { event, .. } | Hypothesis::Band { event, .. } => event.space().clone(),
            Hypothesis::And(c) | Hypothesis::Or(c) => c[0].space(),
            Hypothesis::ClosedComplement(open) => open.space(),
            Hypothesis::FSigma(f) => f.piece(1).space(),
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |c: &[Hypothesis], sep: &str| c.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep);
        match self {
            Hypothesis::SubBasic { event, threshold } => {
                write!(f, "P({event}) > {}", show(threshold))
            }
            Hypothesis::Band { event, lower, upper } => {
                write!(f, "{} < P({event}) < {}", show(lower), show(upper))
            }
            Hypothesis::And(c) => write!(f, "({})", join(c, " and ")),
            Hypothesis::Or(c) => write!(f, "({})", join(c, " or ")),
            Hypothesis::ClosedComplement(open) => write!(f, "not {open}"),
            Hypothesis::FSigma(s) => write!(f, "union[{}]", s.name),
        }
    }
}

impl fmt::Debug for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Three-valued membership. `Unknown` only arises from Fσ unions whose
/// checked pieces all miss the world.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    In,
    Out,
    Unknown,
}

impl Membership {
    fn from_bool(b: bool) -> Self {
        if b {
            Membership::In
        } else {
            Membership::Out
        }
    }

    fn negate(self) -> Self {
        match self {
            Membership::In => Membership::Out,
            Membership::Out => Membership::In,
            Membership::Unknown => Membership::Unknown,
        }
    }
}

/// Is `world` in `h`? Fσ unions look at pieces `1..=depth` only.
pub fn contains(h: &Hypothesis, world: &World, depth: usize) -> Result<Membership> {
    match h {
        Hypothesis::SubBasic { event, threshold } => {
            require_feasible(world, event)?;
            Ok(Membership::from_bool(prob(world, event)? > *threshold))
        }
        Hypothesis::Band { event, lower, upper } => {
            require_feasible(world, event)?;
            let p = prob(world, event)?;
            Ok(Membership::from_bool(*lower < p && p < *upper))
        }
        Hypothesis::And(children) => {
            let mut unknown = false;
            for c in children {
                match contains(c, world, depth)? {
                    Membership::Out => return Ok(Membership::Out),
                    Membership::Unknown => unknown = true,
                    Membership::In => {}
                }
            }
            Ok(if unknown { Membership::Unknown } else { Membership::In })
        }
        Hypothesis::Or(children) => {
            let mut unknown = false;
            for c in children {
                match contains(c, world, depth)? {
                    Membership::In => return Ok(Membership::In),
                    Membership::Unknown => unknown = true,
                    Membership::Out => {}
                }
            }
            Ok(if unknown { Membership::Unknown } else { Membership::Out })
        }
        Hypothesis::ClosedComplement(open) => Ok(contains(open, world, depth)?.negate()),
        Hypothesis::FSigma(f) => {
            let last = f.len.map_or(depth, |len| len.min(depth));
            for i in 1..=last {
                if contains(&f.piece(i), world, depth)? == Membership::In {
                    return Ok(Membership::In);
                }
            }
            Ok(Membership::Unknown)
        }
    }
}

/// Rewrites `{μ : μ(A) ∈ (a, b)}` as `{μ : μ(A) > a} ∩ {μ : μ(Aᶜ) > 1 − b}`.
pub fn band_as_intersection(event: &Event, lower: Rational, upper: Rational) -> Result<Hypothesis> {
    if lower >= upper {
        return Err(Error::InvalidHypothesis("band needs lower < upper".into()));
    }
    let left = Hypothesis::sub_basic(event.clone(), lower)?;
    let right = Hypothesis::sub_basic(event.complement(), Rational::one() - upper)?;
    Hypothesis::and(vec![left, right])
}

/// A finite or enumerated list of answers that partition the worlds.
#[derive(Clone, Debug)]
pub struct Partition {
    answers: Vec<Hypothesis>,
    labels: Vec<String>,
}

impl Partition {
    pub fn new(answers: Vec<Hypothesis>, labels: Vec<String>) -> Result<Self> {
        if answers.is_empty() || answers.len() != labels.len() {
            return Err(Error::InvalidPartition("need one label per answer".into()));
        }
        for a in &answers {
            a.validate()?;
        }
        Ok(Partition { answers, labels })
    }

    pub fn answers(&self) -> &[Hypothesis] {
        &self.answers
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> Option<&str> {
        self.labels.get(index.checked_sub(1)?).map(String::as_str)
    }

    /// The (1-based) answer containing the world, if one is found at `depth`.
    pub fn answer_of(&self, world: &World, depth: usize) -> Result<Option<usize>> {
        let mut found = None;
        for (i, a) in self.answers.iter().enumerate() {
            if contains(a, world, depth)? == Membership::In {
                if found.is_some() {
                    return Err(Error::InvalidPartition(format!("{world} lies in more than one answer")));
                }
                found = Some(i + 1);
            }
        }
        Ok(found)
    }

    /// Exactly one answer must contain each configured world.
    pub fn validate_on(&self, worlds: &[World], depth: usize) -> Result<()> {
        for w in worlds {
            if self.answer_of(w, depth)?.is_none() {
                return Err(Error::InvalidPartition(format!("no answer contains {w}")));
            }
        }
        Ok(())
    }
}

/// A closed band `{μ : lower ≤ μ(A) ≤ upper}` as the complement of
/// `{μ(Aᶜ) > 1 − lower} ∪ {μ(A) > upper}`.
pub fn closed_band(event: &Event, lower: Rational, upper: Rational) -> Result<Hypothesis> {
    let below = Hypothesis::sub_basic(event.complement(), Rational::one() - lower)?;
    let above = Hypothesis::sub_basic(event.clone(), upper)?;
    Hypothesis::closed_complement(Hypothesis::or(vec![below, above])?)
}

/// `{μ : μ(A) ≤ b}`.
pub fn at_most(event: &Event, bound: Rational) -> Result<Hypothesis> {
    Hypothesis::closed_complement(Hypothesis::sub_basic(event.clone(), bound)?)
}

/// `{μ : μ(A) ≥ b}`, written as `μ(Aᶜ) ≤ 1 − b`.
pub fn at_least(event: &Event, bound: Rational) -> Result<Hypothesis> {
    at_most(&event.complement(), Rational::one() - bound)
}

/// Fσ presentation of the open band `(lower, upper)` as the closed bands
/// `[lower + 1/j, upper − 1/j]` for `j = start, start + 1, …`.
pub fn closed_band_union(event: &Event, lower: Rational, upper: Rational, start: usize) -> Result<Hypothesis> {
    if lower >= upper || start == 0 {
        return Err(Error::InvalidHypothesis("closed bands need lower < upper and start ≥ 1".into()));
    }
    let piece = {
        let (event, lower, upper) = (event.clone(), lower.clone(), upper.clone());
        move |i: usize| {
            let step = Rational::new(1.into(), ((start + i - 1) as i64).into());
            closed_band(&event, &lower + &step, &upper - &step).expect("band limits in [0,1]")
        }
    };
    // the first band must be nonempty and inside [0, 1]
    let first = Rational::new(1.into(), (start as i64).into());
    if &lower + &first > &upper - &first || (&upper - &first) < Rational::zero() {
        return Err(Error::InvalidHypothesis(format!("band {start} is empty")));
    }
    let name = format!("[{} + 1/j, {} - 1/j], j >= {start}", show(&lower), show(&upper));
    Ok(Hypothesis::FSigma(FSigma::enumerated(name, piece)?))
}

/// The three-cell bias partition: `μ(A) ≤ 1/3`, `1/3 < μ(A) < 2/3` (as a
/// union of closed bands starting with the point `{1/2}`), `μ(A) ≥ 2/3`.
pub fn three_cell_partition(event: &Event) -> Result<Partition> {
    let third = Rational::new(1.into(), 3.into());
    let two_thirds = Rational::new(2.into(), 3.into());
    Partition::new(
        vec![
            at_most(event, third.clone())?,
            closed_band_union(event, third.clone(), two_thirds.clone(), 6)?,
            at_least(event, two_thirds)?,
        ],
        vec!["low".into(), "middle".into(), "high".into()],
    )
}
