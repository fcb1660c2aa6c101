use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::measures::realset::RealSet;
use crate::measures::space::SampleSpace;
use crate::rational::Rational;

/// An element of the algebra generated by the basis of a sample space.
///
/// Finite alphabets store a membership mask over the symbols; the real line
/// stores a canonical [`RealSet`]. Two events are equal iff they have the
/// same extension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Event {
    space: Arc<SampleSpace>,
    form: EventForm,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EventForm {
    Symbols(Vec<bool>),
    Real(RealSet),
}

impl Event {
    pub fn empty(space: &Arc<SampleSpace>) -> Self {
        let form = match &**space {
            SampleSpace::Finite { symbols } => EventForm::Symbols(vec![false; symbols.len()]),
            SampleSpace::RealLine => EventForm::Real(RealSet::empty()),
        };
        Event { space: space.clone(), form }
    }

    pub fn whole(space: &Arc<SampleSpace>) -> Self {
        Self::empty(space).complement()
    }

    pub fn symbols(space: &Arc<SampleSpace>, members: &[&str]) -> Result<Self> {
        let mut mask = match &**space {
            SampleSpace::Finite { symbols } => vec![false; symbols.len()],
            SampleSpace::RealLine => return Err(Error::InvalidEvent("symbol sets need a finite alphabet".into())),
        };
        for m in members {
            let idx = space.symbol_index(m).ok_or_else(|| Error::InvalidEvent(format!("unknown symbol `{m}`")))?;
            mask[idx] = true;
        }
        Ok(Event { space: space.clone(), form: EventForm::Symbols(mask) })
    }

    pub fn from_mask(space: &Arc<SampleSpace>, mask: Vec<bool>) -> Result<Self> {
        match space.symbols() {
            Some(symbols) if symbols.len() == mask.len() => {
                Ok(Event { space: space.clone(), form: EventForm::Symbols(mask) })
            }
            _ => Err(Error::InvalidEvent("mask does not match the alphabet".into())),
        }
    }

    pub fn real(space: &Arc<SampleSpace>, set: RealSet) -> Result<Self> {
        match **space {
            SampleSpace::RealLine => Ok(Event { space: space.clone(), form: EventForm::Real(set) }),
            _ => Err(Error::InvalidEvent("interval events need the real line".into())),
        }
    }

    pub fn open_interval(space: &Arc<SampleSpace>, a: Rational, b: Rational) -> Result<Self> {
        Self::real(space, RealSet::open(a, b)?)
    }

    /// Parses an event literal: `{H,T}` or `{}` on an alphabet, an interval
    /// union such as `(0, 1/2] ∪ [1, +inf)` on the real line, `all` for the
    /// whole space, and a leading `~` for complement.
    pub fn parse(space: &Arc<SampleSpace>, text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix('~') {
            return Ok(Self::parse(space, rest)?.complement());
        }
        if matches!(t, "all" | "Ω") {
            return Ok(Self::whole(space));
        }
        if matches!(t, "∅" | "empty") {
            return Ok(Self::empty(space));
        }
        match &**space {
            SampleSpace::Finite { .. } => {
                let inner = t
                    .strip_prefix('{')
                    .and_then(|s| s.strip_suffix('}'))
                    .ok_or_else(|| Error::InvalidEvent(format!("expected `{{...}}`, got `{t}`")))?;
                let members: Vec<&str> = inner.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
                Self::symbols(space, &members)
            }
            SampleSpace::RealLine => Self::real(space, RealSet::parse(t)?),
        }
    }

    pub fn space(&self) -> &Arc<SampleSpace> {
        &self.space
    }

    pub fn form(&self) -> &EventForm {
        &self.form
    }

    pub fn complement(&self) -> Self {
        let form = match &self.form {
            EventForm::Symbols(mask) => EventForm::Symbols(mask.iter().map(|b| !b).collect()),
            EventForm::Real(set) => EventForm::Real(set.complement()),
        };
        Event { space: self.space.clone(), form }
    }

    fn combine(
        &self,
        other: &Event,
        op: impl Fn(bool, bool) -> bool,
        real: impl Fn(&RealSet, &RealSet) -> RealSet,
    ) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let form = match (&self.form, &other.form) {
            (EventForm::Symbols(a), EventForm::Symbols(b)) => {
                EventForm::Symbols(a.iter().zip(b).map(|(x, y)| op(*x, *y)).collect())
            }
            (EventForm::Real(a), EventForm::Real(b)) => EventForm::Real(real(a, b)),
            _ => return Err(Error::SpaceMismatch),
        };
        Ok(Event { space: self.space.clone(), form })
    }

    pub fn union(&self, other: &Event) -> Result<Self> {
        self.combine(other, |a, b| a || b, RealSet::union)
    }

    pub fn intersection(&self, other: &Event) -> Result<Self> {
        self.combine(other, |a, b| a && b, RealSet::intersection)
    }

    pub fn difference(&self, other: &Event) -> Result<Self> {
        self.intersection(&other.complement())
    }

    pub fn is_empty(&self) -> bool {
        match &self.form {
            EventForm::Symbols(mask) => !mask.iter().any(|b| *b),
            EventForm::Real(set) => set.is_empty(),
        }
    }

    /// Boundary points; always empty on a finite alphabet.
    pub fn endpoints(&self) -> &[Rational] {
        match &self.form {
            EventForm::Symbols(_) => &[],
            EventForm::Real(set) => set.endpoints(),
        }
    }

    pub fn contains_symbol(&self, index: usize) -> bool {
        match &self.form {
            EventForm::Symbols(mask) => mask.get(index).copied().unwrap_or(false),
            EventForm::Real(_) => false,
        }
    }

    pub fn contains_real(&self, x: f64) -> bool {
        match &self.form {
            EventForm::Real(set) => set.contains_f64(x),
            EventForm::Symbols(_) => false,
        }
    }

    /// Every event of a finite alphabet (the full power set).
    pub fn all_events(space: &Arc<SampleSpace>) -> Result<Vec<Self>> {
        let k = space.symbols().ok_or_else(|| Error::InvalidEvent("the real-line algebra is infinite".into()))?.len();
        if k > 16 {
            return Err(Error::InvalidEvent(format!("2^{k} events is too many to enumerate")));
        }
        Ok((0..1u32 << k)
            .map(|bits| Event {
                space: space.clone(),
                form: EventForm::Symbols((0..k).map(|i| bits >> i & 1 == 1).collect()),
            })
            .collect())
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.form {
            EventForm::Symbols(mask) => {
                let symbols = self.space.symbols().unwrap_or(&[]);
                let names: Vec<&str> = mask.iter().zip(symbols).filter(|(m, _)| **m).map(|(_, s)| s.as_str()).collect();
                write!(f, "{{{}}}", names.join(","))
            }
            EventForm::Real(set) => set.fmt(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coin_algebra_has_four_events() {
        let coin = SampleSpace::coin();
        let all = Event::all_events(&coin).unwrap();
        assert_eq!(all.len(), 4);
        let shown: Vec<String> = all.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["{}", "{H}", "{T}", "{H,T}"]);
    }

    #[test]
    fn parse_and_complement() {
        let coin = SampleSpace::coin();
        let h = Event::parse(&coin, "{H}").unwrap();
        assert_eq!(h.complement(), Event::parse(&coin, "{T}").unwrap());
        assert_eq!(Event::parse(&coin, "~{}").unwrap(), Event::whole(&coin));
        assert!(Event::parse(&coin, "{X}").is_err());
        let line = SampleSpace::real_line();
        let e = Event::parse(&line, "(1/4, 1/2)").unwrap();
        assert_eq!(e.to_string(), "(1/4, 1/2)");
        assert!(Event::parse(&line, "{H}").is_err());
    }

    #[test]
    fn mixing_spaces_is_an_error() {
        let h = Event::parse(&SampleSpace::coin(), "{H}").unwrap();
        let i = Event::parse(&SampleSpace::real_line(), "(0, 1)").unwrap();
        assert_eq!(h.union(&i), Err(Error::SpaceMismatch));
        let other = SampleSpace::finite(["a", "b"]).unwrap();
        assert_eq!(h.intersection(&Event::whole(&other)), Err(Error::SpaceMismatch));
    }
}
