//! Structured text for hypotheses:
//!
//! ```text
//! P({H}) > 1/2          P({H}) <= 1/2        P({H}) >= 2/3      P({H}) < 1/4
//! 1/3 < P({H}) < 2/3    and(h, h, …)         or(h, h, …)        not(h)
//! bands({H}, 1/3, 2/3, 6)                    union(c, c, …)     a named example
//! ```

use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use weakverify::hypotheses::{at_least, at_most, closed_band_union, FSigma};
use weakverify::rational::{parse_rational, Rational};
use weakverify::{Event, Hypothesis, SampleSpace};

use crate::examples;

/// Splits at top-level occurrences of `sep`, respecting (), [] and {}.
fn split_top(text: &str, sep: char) -> Vec<&str> {
    let mut depth = 0i32;
    let mut parts = Vec::new();
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&text[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

/// Index just past the bracket closing the one opened at `open`.
fn matching(text: &str, open: usize) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in text[open..].char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(open + i + 1);
                }
            }
            _ => {}
        }
    }
    None
}

/// `name(args…)` spanning the whole text.
fn call(text: &str) -> Option<(&str, Vec<&str>)> {
    let open = text.find('(')?;
    let name = &text[..open];
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphabetic()) {
        return None;
    }
    (matching(text, open)? == text.len()).then(|| (name, split_top(&text[open + 1..text.len() - 1], ',')))
}

fn rational(text: &str) -> Result<Rational> {
    Ok(parse_rational(text)?)
}

pub fn hypothesis(space: &Arc<SampleSpace>, text: &str) -> Result<Hypothesis> {
    let t = text.trim();
    if let Some((name, args)) = call(t) {
        let sub = |a: &&str| hypothesis(space, a);
        return match name {
            "and" => Ok(Hypothesis::and(args.iter().map(sub).collect::<Result<_>>()?)?),
            "or" => Ok(Hypothesis::or(args.iter().map(sub).collect::<Result<_>>()?)?),
            "not" => {
                let [inner] = args[..] else { bail!("not(…) takes one argument") };
                Ok(Hypothesis::closed_complement(hypothesis(space, inner)?)?)
            }
            "union" => {
                let pieces = args.iter().map(sub).collect::<Result<Vec<_>>>()?;
                Ok(Hypothesis::FSigma(FSigma::finite(t, pieces)?))
            }
            "bands" => {
                let [e, lo, hi, start] = args[..] else {
                    bail!("bands(event, lower, upper, start) takes four arguments")
                };
                let start: usize = start.trim().parse().context("bands start index")?;
                Ok(closed_band_union(&Event::parse(space, e)?, rational(lo)?, rational(hi)?, start)?)
            }
            "P" => comparison(space, t),
            other => bail!("unknown combinator `{other}`"),
        };
    }
    if t.contains("P(") {
        return comparison(space, t);
    }
    examples::hypothesis(space, t)
}

fn comparison(space: &Arc<SampleSpace>, t: &str) -> Result<Hypothesis> {
    let at = t.find("P(").ok_or_else(|| anyhow!("expected P(event) in `{t}`"))?;
    let close = matching(t, at + 1).ok_or_else(|| anyhow!("unbalanced brackets in `{t}`"))?;
    let event = Event::parse(space, &t[at + 2..close - 1])?;
    let left = t[..at].trim();
    let right = t[close..].trim();
    if !left.is_empty() {
        let lower = left.strip_suffix('<').ok_or_else(|| anyhow!("expected `a < P(A) < b` in `{t}`"))?;
        let upper = right.strip_prefix('<').ok_or_else(|| anyhow!("expected `a < P(A) < b` in `{t}`"))?;
        return Ok(Hypothesis::band(event, rational(lower)?, rational(upper)?)?);
    }
    let one = Rational::from_integer(1.into());
    for (op, build) in [(">=", 0u8), ("<=", 1), ("≥", 0), ("≤", 1), (">", 2), ("<", 3)] {
        if let Some(rest) = right.strip_prefix(op) {
            let b = rational(rest)?;
            return Ok(match build {
                0 => at_least(&event, b)?,
                1 => at_most(&event, b)?,
                2 => Hypothesis::sub_basic(event, b)?,
                _ => Hypothesis::sub_basic(event.complement(), one - b)?,
            });
        }
    }
    bail!("expected a comparison after P(…) in `{t}`")
}
