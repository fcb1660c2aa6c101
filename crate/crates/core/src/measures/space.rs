use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// A sample space together with the countable basis of its topology.
///
/// A finite alphabet carries the discrete topology with the singletons as
/// basis; the real line carries open intervals with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum SampleSpace {
    Finite { symbols: Vec<String> },
    RealLine,
}

impl SampleSpace {
    pub fn finite<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Arc<Self>> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidEvent("alphabet must not be empty".into()));
        }
        let mut seen = HashSet::new();
        for s in &symbols {
            if s.is_empty() || s.contains([',', '{', '}', ' ']) {
                return Err(Error::InvalidEvent(format!("bad symbol `{s}`")));
            }
            if !seen.insert(s.as_str()) {
                return Err(Error::InvalidEvent(format!("duplicate symbol `{s}`")));
            }
        }
        Ok(Arc::new(SampleSpace::Finite { symbols }))
    }

    /// The outcome space of one coin flip, `{H, T}`.
    pub fn coin() -> Arc<Self> {
        Arc::new(SampleSpace::Finite { symbols: vec!["H".into(), "T".into()] })
    }

    pub fn real_line() -> Arc<Self> {
        Arc::new(SampleSpace::RealLine)
    }

    pub fn symbols(&self) -> Option<&[String]> {
        match self {
            SampleSpace::Finite { symbols } => Some(symbols),
            SampleSpace::RealLine => None,
        }
    }

    pub fn symbol_index(&self, symbol: &str) -> Option<usize> {
        self.symbols()?.iter().position(|s| s == symbol)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, SampleSpace::Finite { .. })
    }
}

impl fmt::Display for SampleSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleSpace::Finite { symbols } => write!(f, "{{{}}}", symbols.join(",")),
            SampleSpace::RealLine => f.write_str("R"),
        }
    }
}
