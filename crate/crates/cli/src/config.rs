//! The TOML experiment schema.

use std::fmt;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Verify,
    Limit,
    Solve,
    Prop,
    WeakConvergence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// A rational written as a TOML number or string (`"1/3"`, `"0.05"`).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Float(f64),
    Text(String),
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num::Int(i) => write!(f, "{i}"),
            // shortest round-trip text keeps 0.05 as 1/20
            Num::Float(x) => write!(f, "{x}"),
            Num::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum SpaceSpec {
    Named(String),
    Symbols(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub at: Num,
    pub mass: Num,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WorldSpec {
    Bernoulli {
        p: Num,
        label: Option<String>,
    },
    Categorical {
        probs: Vec<Num>,
        label: Option<String>,
    },
    Uniform {
        lo: Num,
        hi: Num,
        #[serde(default)]
        atoms: Vec<AtomSpec>,
        label: Option<String>,
    },
    Named {
        name: String,
    },
    Sequence {
        bits: String,
    },
    /// `Bernoulli(base + 2^-k)` for `k = 1..=count`.
    DyadicCoins {
        base: Num,
        count: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnswerSpec {
    pub label: String,
    pub hypothesis: String,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ClaimSpec {
    Sv3Bound {
        alpha: f64,
        world: Option<usize>,
    },
    Sv4Eventual {
        target: f64,
        world: Option<usize>,
    },
    Convergence {
        horizon: usize,
        world: Option<usize>,
    },
    /// Propositional runs: the final quarter of stages all show `to`.
    Stabilizes {
        to: String,
        world: Option<usize>,
    },
    /// Weak convergence holds at the configured tolerance.
    Converges {},
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub experiment: Experiment,
    pub space: Option<SpaceSpec>,
    #[serde(default)]
    pub worlds: Vec<WorldSpec>,
    pub hypothesis: Option<String>,
    pub partition: Option<String>,
    #[serde(default)]
    pub answers: Vec<AnswerSpec>,
    /// `any`, `piece:J` or `answer:I`.
    pub accept: Option<String>,
    pub method: Option<String>,
    pub alpha: Option<Num>,
    pub n_max: Option<usize>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub stages: Option<usize>,
    pub limit: Option<WorldSpec>,
    pub events: Option<Vec<String>>,
    pub tol: Option<f64>,
    pub convergence_target: Option<f64>,
    #[serde(default)]
    pub claims: Vec<ClaimSpec>,
    pub output: Option<OutputSpec>,
}

/// A semantic error tied to a config key.
#[derive(Debug)]
pub struct KeyError {
    pub key: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for KeyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "`{}` (line {l}): {}", self.key, self.message),
            None => write!(f, "`{}`: {}", self.key, self.message),
        }
    }
}

impl std::error::Error for KeyError {}

/// 1-based line of the first assignment to `key` (or table header `[key]`).
pub fn line_of(text: &str, key: &str) -> Option<usize> {
    text.lines()
        .position(|l| {
            let l = l.trim_start();
            let assigns = l.strip_prefix(key).is_some_and(|rest| rest.trim_start().starts_with('='));
            let header = l.trim_start_matches('[').trim_end_matches(']').trim() == key && l.starts_with('[');
            assigns || header
        })
        .map(|i| i + 1)
}

pub struct Source {
    pub text: String,
    pub config: Config,
}

impl Source {
    pub fn parse(text: String) -> Result<Self> {
        let config: Config = toml::from_str(&text).context("malformed config")?;
        Ok(Source { text, config })
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        Self::parse(text)
    }

    pub fn key_error(&self, key: &str, message: impl Into<String>) -> anyhow::Error {
        KeyError { key: key.into(), line: line_of(&self.text, key), message: message.into() }.into()
    }

    /// Fails with a key-tagged error when `key` is missing.
    pub fn require<'a, T>(&self, value: &'a Option<T>, key: &str) -> Result<&'a T> {
        match value {
            Some(v) => Ok(v),
            None => Err(self.key_error(key, format!("missing key for {:?}", self.config.experiment))),
        }
    }

    pub fn check_positive(&self, value: usize, key: &str) -> Result<()> {
        if value == 0 {
            bail!(self.key_error(key, format!("{key} must be at least 1")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_key_lines() {
        let text = "experiment = \"verify\"\n\nalpha = 1.5\n[output]\npath = \"x\"\n";
        assert_eq!(line_of(text, "alpha"), Some(3));
        assert_eq!(line_of(text, "output"), Some(4));
        assert_eq!(line_of(text, "trials"), None);
        assert_eq!(line_of("alphabet = 1\nalpha=2", "alpha"), Some(2));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = Source::parse("experiment = \"verify\"\nalphaa = 0.1\n".into()).err().unwrap();
        let text = format!("{err:#}");
        assert!(text.contains("alphaa") && text.contains("line 2"), "{text}");
    }

    #[test]
    fn worlds_are_tagged() {
        let s =
            Source::parse("experiment = \"verify\"\n[[worlds]]\nkind = \"bernoulli\"\np = \"1/2\"\n".into()).unwrap();
        assert_eq!(s.config.worlds, vec![WorldSpec::Bernoulli { p: Num::Text("1/2".into()), label: None }]);
    }
}
