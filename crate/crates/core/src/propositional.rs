//! Learning on infinite binary sequences with cylinders as information
//! states: verifiers for open sets, limiting verifiers for disjoint locally
//! closed presentations, and solvers built from them.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ultimately periodic binary sequence `prefix · cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SequenceWorld {
    prefix: Vec<u8>,
    cycle: Vec<u8>,
}

impl SequenceWorld {
    pub fn new(prefix: Vec<u8>, cycle: Vec<u8>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidWorld("cycle must be nonempty".into()));
        }
        if prefix.iter().chain(&cycle).any(|b| *b > 1) {
            return Err(Error::InvalidWorld("bits must be 0 or 1".into()));
        }
        Ok(SequenceWorld { prefix, cycle })
    }

    pub fn constant(bit: u8) -> Result<Self> {
        Self::new(vec![], vec![bit])
    }

    /// Parses `"0(01)"` (prefix, then cycle in parentheses) or a finite
    /// string such as `"010101…"`, read as its shortest repeating tail.
    pub fn parse(text: &str) -> Result<Self> {
        let bits = |s: &str| {
            s.chars()
                .map(|c| match c {
                    '0' => Ok(0u8),
                    '1' => Ok(1u8),
                    _ => Err(Error::Parse(format!("`{c}` is not a bit in `{text}`"))),
                })
                .collect::<Result<Vec<u8>>>()
        };
        let t = text.trim();
        if let Some(open) = t.find('(') {
            let inner =
                t[open + 1..].strip_suffix(')').ok_or_else(|| Error::Parse(format!("unclosed cycle in `{text}`")))?;
            return Self::new(bits(&t[..open])?, bits(inner)?);
        }
        let t = t.trim_end_matches('…').trim_end_matches("...");
        let s = bits(t)?;
        if s.is_empty() {
            return Err(Error::Parse("empty sequence".into()));
        }
        // least period, then least prefix, with at least two full repeats
        for p in 1..=s.len() {
            for m in 0..s.len() {
                if s.len() - m < 2 * p {
                    break;
                }
                if (m..s.len() - p).all(|i| s[i] == s[i + p]) {
                    return Self::new(s[..m].to_vec(), s[m..m + p].to_vec());
                }
            }
        }
        Self::new(vec![], s)
    }

    pub fn bit(&self, i: usize) -> u8 {
        match i.checked_sub(self.prefix.len()) {
            None => self.prefix[i],
            Some(j) => self.cycle[j % self.cycle.len()],
        }
    }

    /// `w|_n`.
    pub fn initial_segment(&self, n: usize) -> Vec<u8> {
        (0..n).map(|i| self.bit(i)).collect()
    }

    /// `σ · self`.
    pub fn preceded_by(&self, sigma: &[u8]) -> Result<Self> {
        Self::new([sigma, &self.prefix].concat(), self.cycle.clone())
    }

    /// Length after which the sequence is purely periodic.
    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }
}

impl fmt::Display for SequenceWorld {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |v: &[u8]| v.iter().map(|b| char::from(b'0' + b)).collect::<String>();
        write!(f, "{}({})", s(&self.prefix), s(&self.cycle))
    }
}

/// The basic cylinder `[σ]` of all sequences extending `σ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cylinder {
    pub prefix: Vec<u8>,
}

impl Cylinder {
    /// `[self] ⊆ [other]`.
    pub fn entails(&self, other: &Cylinder) -> bool {
        self.prefix.starts_with(&other.prefix)
    }
}

type EntailsFn = dyn Fn(&[u8]) -> bool + Send + Sync;
type MemberFn = dyn Fn(&SequenceWorld) -> bool + Send + Sync;

/// An open set given by its entailment oracle `[σ] ⊆ O`.
#[derive(Clone)]
pub enum OpenSet {
    Everything,
    Nothing,
    /// Some position carries `bit`.
    SomeSymbol(u8),
    SymbolAt {
        pos: usize,
        bit: u8,
    },
    /// Some position `≥ pos` carries `bit`.
    SymbolAtOrAfter {
        pos: usize,
        bit: u8,
    },
    Custom {
        name: String,
        entails: Arc<EntailsFn>,
        member: Arc<MemberFn>,
    },
}

impl OpenSet {
    pub fn entails(&self, prefix: &[u8]) -> bool {
        match self {
            OpenSet::Everything => true,
            OpenSet::Nothing => false,
            OpenSet::SomeSymbol(b) => prefix.contains(b),
            OpenSet::SymbolAt { pos, bit } => prefix.get(*pos) == Some(bit),
            OpenSet::SymbolAtOrAfter { pos, bit } => prefix.iter().skip(*pos).any(|b| b == bit),
            OpenSet::Custom { entails, .. } => entails(prefix),
        }
    }

    /// Exact membership of a world.
    pub fn contains(&self, w: &SequenceWorld) -> bool {
        let horizon = |pos: usize| pos.max(w.prefix_len()) + w.period();
        match self {
            OpenSet::Everything => true,
            OpenSet::Nothing => false,
            OpenSet::SomeSymbol(b) => (0..horizon(0)).any(|i| w.bit(i) == *b),
            OpenSet::SymbolAt { pos, bit } => w.bit(*pos) == *bit,
            OpenSet::SymbolAtOrAfter { pos, bit } => (*pos..horizon(*pos)).any(|i| w.bit(i) == *bit),
            OpenSet::Custom { member, .. } => member(w),
        }
    }

    pub fn name(&self) -> String {
        match self {
            OpenSet::Everything => "W".into(),
            OpenSet::Nothing => "∅".into(),
            OpenSet::SomeSymbol(b) => format!("some {b}"),
            OpenSet::SymbolAt { pos, bit } => format!("{bit} at {pos}"),
            OpenSet::SymbolAtOrAfter { pos, bit } => format!("{bit} at or after {pos}"),
            OpenSet::Custom { name, .. } => name.clone(),
        }
    }
}

impl fmt::Debug for OpenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

type PairFn = dyn Fn(usize) -> (OpenSet, OpenSet) + Send + Sync;

/// `H = ⊔_i O_i ∖ O_i′`. Disjointness of the pieces is the caller's
/// obligation.
#[derive(Clone)]
pub struct LocallyClosedPresentation {
    name: String,
    len: Option<usize>,
    pair: Arc<PairFn>,
}

impl LocallyClosedPresentation {
    pub fn finite(name: impl Into<String>, pairs: Vec<(OpenSet, OpenSet)>) -> Self {
        let len = pairs.len();
        let pairs = Arc::new(pairs);
        LocallyClosedPresentation { name: name.into(), len: Some(len), pair: Arc::new(move |i| pairs[i - 1].clone()) }
    }

    /// Infinitely many pieces `i ↦ (O_i, O_i′)`, 1-based.
    pub fn enumerated(
        name: impl Into<String>,
        pair: impl Fn(usize) -> (OpenSet, OpenSet) + Send + Sync + 'static,
    ) -> Self {
        LocallyClosedPresentation { name: name.into(), len: None, pair: Arc::new(pair) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> Option<usize> {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == Some(0)
    }

    pub fn pair(&self, i: usize) -> (OpenSet, OpenSet) {
        (self.pair)(i)
    }

    /// The piece containing `w`, searching indices up to `depth`.
    pub fn piece_of(&self, w: &SequenceWorld, depth: usize) -> Option<usize> {
        let last = self.len.map_or(depth, |l| l.min(depth));
        (1..=last).find(|&i| {
            let (o, o2) = self.pair(i);
            o.contains(w) && !o2.contains(w)
        })
    }
}

/// A conclusion drawn from a finite prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Conclusion {
    H,
    Piece(usize),
    Answer(usize),
    W,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conclusion::H => f.write_str("H"),
            Conclusion::Piece(i) => write!(f, "piece({i})"),
            Conclusion::Answer(i) => write!(f, "answer({i})"),
            Conclusion::W => f.write_str("W"),
        }
    }
}

type ConcludeFn = dyn Fn(&[u8]) -> Conclusion + Send + Sync;

/// A map from information states to conclusions.
#[derive(Clone)]
pub struct PropMethod {
    name: String,
    labels: Vec<String>,
    rule: Arc<ConcludeFn>,
}

impl PropMethod {
    pub fn new(name: impl Into<String>, rule: impl Fn(&[u8]) -> Conclusion + Send + Sync + 'static) -> Self {
        PropMethod { name: name.into(), labels: Vec::new(), rule: Arc::new(rule) }
    }

    pub fn conclude(&self, prefix: &[u8]) -> Conclusion {
        (self.rule)(prefix)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Display text of a conclusion, using answer labels when known.
    pub fn describe(&self, c: Conclusion) -> String {
        match c {
            Conclusion::Answer(i) => self.labels.get(i - 1).cloned().unwrap_or_else(|| c.to_string()),
            other => other.to_string(),
        }
    }
}

impl fmt::Debug for PropMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PropMethod({})", self.name)
    }
}

/// Concludes `H` exactly when the information entails `O`.
pub fn open_verifier(o: OpenSet) -> PropMethod {
    PropMethod::new(format!("verify[{}]", o.name()), move |s| if o.entails(s) { Conclusion::H } else { Conclusion::W })
}

fn least_piece(p: &LocallyClosedPresentation, s: &[u8]) -> Option<usize> {
    let last = p.len.map_or(s.len() + 1, |l| l.min(s.len() + 1));
    (1..=last).find(|&i| {
        let (o, o2) = p.pair(i);
        o.entails(s) && !o2.entails(s)
    })
}

/// Conjectures the least piece `i ≤ |σ| + 1` with `[σ] ⊆ O_i` and
/// `[σ] ⊄ O_i′`, and `W` when there is none.
pub fn limiting_verifier_prop(p: LocallyClosedPresentation) -> PropMethod {
    PropMethod::new(format!("limit[{}]", p.name), move |s| least_piece(&p, s).map_or(Conclusion::W, Conclusion::Piece))
}

/// Outputs the least answer whose limiting verifier conjectures a piece.
pub fn solver_prop(answers: Vec<(String, LocallyClosedPresentation)>) -> PropMethod {
    let labels = answers.iter().map(|(l, _)| l.clone()).collect();
    let name = format!("solve[{}]", answers.iter().map(|(l, _)| l.as_str()).collect::<Vec<_>>().join(" | "));
    let pres: Vec<_> = answers.into_iter().map(|(_, p)| p).collect();
    let mut m = PropMethod::new(name, move |s| {
        pres.iter().position(|p| least_piece(p, s).is_some()).map_or(Conclusion::W, |i| Conclusion::Answer(i + 1))
    });
    m.labels = labels;
    m
}

/// Outputs `m(w|_n)` for `n = 0..=stages`.
pub fn simulate_inquiry(world: &SequenceWorld, m: &PropMethod, stages: usize) -> Result<Vec<Conclusion>> {
    if stages == 0 {
        return Err(Error::InvalidPlan("stages must be at least 1".into()));
    }
    let path = world.initial_segment(stages);
    Ok((0..=stages).map(|n| m.conclude(&path[..n])).collect())
}

/// `{000…}`: no one ever occurs.
pub fn constantly_zero() -> LocallyClosedPresentation {
    LocallyClosedPresentation::finite("constantly zero", vec![(OpenSet::Everything, OpenSet::SomeSymbol(1))])
}

/// Eventually all zeros, split by the position of the last one: piece 1
/// has no one after position 0, piece `k ≥ 2` has its last one at `k − 1`.
pub fn eventually_zero() -> LocallyClosedPresentation {
    LocallyClosedPresentation::enumerated("eventually zero", |k| {
        if k == 1 {
            (OpenSet::Everything, OpenSet::SymbolAtOrAfter { pos: 1, bit: 1 })
        } else {
            (OpenSet::SymbolAt { pos: k - 1, bit: 1 }, OpenSet::SymbolAtOrAfter { pos: k, bit: 1 })
        }
    })
}

/// The open hypothesis "some zero occurs" as a one-piece presentation.
pub fn some_zero() -> LocallyClosedPresentation {
    LocallyClosedPresentation::finite("some zero", vec![(OpenSet::SomeSymbol(0), OpenSet::Nothing)])
}

/// "No zeros", the closed complement of "some zero".
pub fn no_zeros() -> LocallyClosedPresentation {
    LocallyClosedPresentation::finite("no zeros", vec![(OpenSet::Everything, OpenSet::SomeSymbol(0))])
}

/// The partition {"some zero", "no zeros"}.
pub fn zero_or_not() -> Vec<(String, LocallyClosedPresentation)> {
    vec![("some zero".into(), some_zero()), ("no zeros".into(), no_zeros())]
}
