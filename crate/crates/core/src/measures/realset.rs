//! Finite unions of intervals with rational endpoints, kept in a canonical
//! form.
//!
//! A set is stored as its sorted breakpoints `c_1 < … < c_m` together with
//! membership of every breakpoint and of every open gap between consecutive
//! breakpoints. A breakpoint is kept only if membership changes there, which
//! makes the representation unique for a given extension; the retained
//! breakpoints are exactly the topological boundary of the set.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::{parse_rational, show, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Endpoint {
    NegInf,
    PosInf,
    Open(Rational),
    Closed(Rational),
}

impl Endpoint {
    fn value(&self) -> Option<&Rational> {
        match self {
            Endpoint::Open(r) | Endpoint::Closed(r) => Some(r),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (open, lo) = match &self.lo {
            Endpoint::NegInf => ('(', "-inf".to_string()),
            Endpoint::Open(r) => ('(', show(r)),
            Endpoint::Closed(r) => ('[', show(r)),
            Endpoint::PosInf => ('(', "+inf".to_string()),
        };
        let (hi, close) = match &self.hi {
            Endpoint::PosInf => ("+inf".to_string(), ')'),
            Endpoint::Open(r) => (show(r), ')'),
            Endpoint::Closed(r) => (show(r), ']'),
            Endpoint::NegInf => ("-inf".to_string(), ')'),
        };
        write!(f, "{open}{lo}, {hi}{close}")
    }
}

/// Largest double not exceeding a breakpoint, used to place float samples
/// relative to an exact rational without rounding ambiguity.
#[derive(Debug, Clone, Copy)]
struct Probe {
    below: f64,
    exact: bool,
}

impl Probe {
    fn new(cut: &Rational) -> Self {
        let mut below = to_f64(cut);
        let exact_of = |x: f64| Rational::from_float(x).expect("finite breakpoint");
        while exact_of(below) > *cut {
            below = below.next_down();
        }
        while exact_of(below.next_up()) <= *cut {
            below = below.next_up();
        }
        Probe { below, exact: exact_of(below) == *cut }
    }

    /// Position of the cut relative to `x`.
    fn cmp_to(&self, x: f64) -> Ordering {
        match self.below.partial_cmp(&x).expect("x is not NaN") {
            Ordering::Equal if self.exact => Ordering::Equal,
            Ordering::Equal => Ordering::Greater,
            other => other,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RealSet {
    cuts: Vec<Rational>,
    gaps: Vec<bool>,
    at: Vec<bool>,
    probes: Vec<Probe>,
}

impl PartialEq for RealSet {
    fn eq(&self, other: &Self) -> bool {
        self.cuts == other.cuts && self.gaps == other.gaps && self.at == other.at
    }
}

impl Eq for RealSet {}

impl Hash for RealSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.cuts.hash(state);
        self.gaps.hash(state);
        self.at.hash(state);
    }
}

enum Location {
    At(usize),
    Gap(usize),
}

impl RealSet {
    fn from_parts(cuts: Vec<Rational>, gaps: Vec<bool>, at: Vec<bool>) -> Self {
        debug_assert_eq!(gaps.len(), cuts.len() + 1);
        debug_assert_eq!(at.len(), cuts.len());
        let mut kept_cuts = Vec::with_capacity(cuts.len());
        let mut kept_gaps = vec![gaps[0]];
        let mut kept_at = Vec::with_capacity(cuts.len());
        for (i, cut) in cuts.into_iter().enumerate() {
            let before = *kept_gaps.last().unwrap();
            if at[i] == before && gaps[i + 1] == before {
                continue;
            }
            kept_cuts.push(cut);
            kept_at.push(at[i]);
            kept_gaps.push(gaps[i + 1]);
        }
        let probes = kept_cuts.iter().map(Probe::new).collect();
        RealSet { cuts: kept_cuts, gaps: kept_gaps, at: kept_at, probes }
    }

    pub fn empty() -> Self {
        Self::from_parts(vec![], vec![false], vec![])
    }

    pub fn full() -> Self {
        Self::from_parts(vec![], vec![true], vec![])
    }

    pub fn interval(lo: Endpoint, hi: Endpoint) -> Result<Self> {
        let closed = |e: &Endpoint| matches!(e, Endpoint::Closed(_));
        match (&lo, &hi) {
            (Endpoint::PosInf, _) | (_, Endpoint::NegInf) => {
                Err(Error::InvalidEvent("interval bounds are reversed".into()))
            }
            (Endpoint::NegInf, Endpoint::PosInf) => Ok(Self::full()),
            (Endpoint::NegInf, _) => {
                let b = hi.value().unwrap().clone();
                Ok(Self::from_parts(vec![b], vec![true, false], vec![closed(&hi)]))
            }
            (_, Endpoint::PosInf) => {
                let a = lo.value().unwrap().clone();
                Ok(Self::from_parts(vec![a], vec![false, true], vec![closed(&lo)]))
            }
            _ => {
                let a = lo.value().unwrap();
                let b = hi.value().unwrap();
                match a.cmp(b) {
                    Ordering::Less => Ok(Self::from_parts(
                        vec![a.clone(), b.clone()],
                        vec![false, true, false],
                        vec![closed(&lo), closed(&hi)],
                    )),
                    Ordering::Equal if closed(&lo) && closed(&hi) => {
                        Ok(Self::from_parts(vec![a.clone()], vec![false, false], vec![true]))
                    }
                    _ => Err(Error::InvalidEvent(format!(
                        "interval endpoints must satisfy left < right, got {} and {}",
                        show(a),
                        show(b)
                    ))),
                }
            }
        }
    }

    /// The basic open interval `(a, b)`.
    pub fn open(a: Rational, b: Rational) -> Result<Self> {
        Self::interval(Endpoint::Open(a), Endpoint::Open(b))
    }

    pub fn from_intervals(intervals: impl IntoIterator<Item = Interval>) -> Result<Self> {
        intervals.into_iter().try_fold(Self::empty(), |acc, iv| Ok(acc.union(&Self::interval(iv.lo, iv.hi)?)))
    }

    fn locate(&self, point: &Rational) -> Location {
        match self.cuts.binary_search(point) {
            Ok(i) => Location::At(i),
            Err(i) => Location::Gap(i),
        }
    }

    pub fn contains_rational(&self, point: &Rational) -> bool {
        match self.locate(point) {
            Location::At(i) => self.at[i],
            Location::Gap(i) => self.gaps[i],
        }
    }

    /// Exact membership of a double; open/closed tags decide boundary points.
    pub fn contains_f64(&self, x: f64) -> bool {
        if x.is_nan() {
            return false;
        }
        match self.probes.binary_search_by(|p| p.cmp_to(x)) {
            Ok(i) => self.at[i],
            Err(i) => self.gaps[i],
        }
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let mut cuts: Vec<Rational> = self.cuts.iter().chain(&other.cuts).cloned().collect();
        cuts.sort();
        cuts.dedup();
        let two = Rational::from_integer(2.into());
        let gaps = (0..=cuts.len())
            .map(|i| {
                let probe = match (i.checked_sub(1).map(|j| &cuts[j]), cuts.get(i)) {
                    (None, None) => Rational::default(),
                    (None, Some(c)) => c - Rational::one(),
                    (Some(c), None) => c + Rational::one(),
                    (Some(a), Some(b)) => (a + b) / &two,
                };
                op(self.contains_rational(&probe), other.contains_rational(&probe))
            })
            .collect();
        let at = cuts.iter().map(|c| op(self.contains_rational(c), other.contains_rational(c))).collect();
        Self::from_parts(cuts, gaps, at)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn complement(&self) -> Self {
        Self::from_parts(
            self.cuts.clone(),
            self.gaps.iter().map(|g| !g).collect(),
            self.at.iter().map(|a| !a).collect(),
        )
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty() && !self.gaps[0]
    }

    /// Boundary points of the set, in increasing order.
    pub fn endpoints(&self) -> &[Rational] {
        &self.cuts
    }

    pub(crate) fn gap_membership(&self) -> &[bool] {
        &self.gaps
    }

    /// Maximal disjoint intervals in increasing order.
    pub fn intervals(&self) -> Vec<Interval> {
        let mut out = Vec::new();
        let mut start = self.gaps[0].then_some(Endpoint::NegInf);
        for (i, cut) in self.cuts.iter().enumerate() {
            let (at, next) = (self.at[i], self.gaps[i + 1]);
            match start.take() {
                Some(lo) => {
                    let hi = if at { Endpoint::Closed(cut.clone()) } else { Endpoint::Open(cut.clone()) };
                    out.push(Interval { lo, hi });
                    if !at && next {
                        start = Some(Endpoint::Open(cut.clone()));
                    }
                }
                None => match (at, next) {
                    (true, true) => start = Some(Endpoint::Closed(cut.clone())),
                    (true, false) => {
                        out.push(Interval { lo: Endpoint::Closed(cut.clone()), hi: Endpoint::Closed(cut.clone()) })
                    }
                    (false, true) => start = Some(Endpoint::Open(cut.clone())),
                    (false, false) => unreachable!("non-canonical breakpoint"),
                },
            }
        }
        if let Some(lo) = start {
            out.push(Interval { lo, hi: Endpoint::PosInf });
        }
        out
    }

    /// Parses `(1/4, 1/2) ∪ [1, +inf)`; `∅` and `R` denote the empty set and
    /// the whole line. `U` and `|` are accepted in place of `∪`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        match t {
            "∅" | "empty" | "{}" => return Ok(Self::empty()),
            "R" | "all" | "ℝ" => return Ok(Self::full()),
            _ => {}
        }
        let normalized = t.replace('∪', "|").replace(" U ", "|");
        let mut intervals = Vec::new();
        for part in normalized.split('|') {
            intervals.push(parse_interval(part.trim())?);
        }
        Self::from_intervals(intervals)
    }
}

fn parse_interval(text: &str) -> Result<Interval> {
    let bad = |why: &str| Error::InvalidEvent(format!("bad interval `{text}`: {why}"));
    let mut chars = text.chars();
    let open = chars.next().ok_or_else(|| bad("empty"))?;
    let close = chars.next_back().ok_or_else(|| bad("empty"))?;
    let body: String = chars.collect();
    let (a, b) = body.split_once(',').ok_or_else(|| bad("missing comma"))?;
    let endpoint = |s: &str, closed: bool, lower: bool| -> Result<Endpoint> {
        match s.trim() {
            "-inf" | "-∞" if lower => Ok(Endpoint::NegInf),
            "+inf" | "inf" | "∞" | "+∞" if !lower => Ok(Endpoint::PosInf),
            v => {
                let r = parse_rational(v)?;
                Ok(if closed { Endpoint::Closed(r) } else { Endpoint::Open(r) })
            }
        }
    };
    let lo = match open {
        '(' => endpoint(a, false, true)?,
        '[' => endpoint(a, true, true)?,
        _ => return Err(bad("expected `(` or `[`")),
    };
    let hi = match close {
        ')' => endpoint(b, false, false)?,
        ']' => endpoint(b, true, false)?,
        _ => return Err(bad("expected `)` or `]`")),
    };
    Ok(Interval { lo, hi })
}

impl fmt::Display for RealSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.intervals();
        if parts.is_empty() {
            return f.write_str("∅");
        }
        let text: Vec<String> = parts.iter().map(ToString::to_string).collect();
        f.write_str(&text.join(" ∪ "))
    }
}
