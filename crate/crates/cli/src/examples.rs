//! Built-in worlds, hypotheses and partitions addressable by name.

use std::sync::Arc;

use anyhow::{bail, Result};
use weakverify::hypotheses::three_cell_partition;
use weakverify::propositional::{
    constantly_zero, eventually_zero, no_zeros, some_zero, zero_or_not, LocallyClosedPresentation,
};
use weakverify::rational::{parse_rational, ratio};
use weakverify::{Atom, Event, Hypothesis, Partition, SampleSpace, World};

pub const WORLDS: &[&str] =
    &["fair-coin", "heads-biased", "tails-biased", "always-heads", "coin-<p>", "uniform", "uniform-with-atom"];

pub fn world(name: &str) -> Result<World> {
    let w = match name {
        "fair-coin" => World::bernoulli(ratio(1, 2))?,
        "heads-biased" => World::bernoulli(ratio(3, 5))?,
        "tails-biased" => World::bernoulli(ratio(2, 5))?,
        "always-heads" => World::bernoulli(ratio(1, 1))?,
        "uniform" => World::uniform(ratio(0, 1), ratio(1, 1))?,
        "uniform-with-atom" => {
            World::uniform_with_atoms(ratio(0, 1), ratio(1, 1), vec![Atom { at: ratio(1, 2), mass: ratio(3, 10) }])?
        }
        other => match other.strip_prefix("coin-") {
            Some(p) => World::bernoulli(parse_rational(p)?)?,
            None => bail!("unknown world `{other}` (known: {})", WORLDS.join(", ")),
        },
    };
    Ok(w.with_label(name))
}

pub fn hypothesis(space: &Arc<SampleSpace>, name: &str) -> Result<Hypothesis> {
    let heads = || Event::parse(space, "{H}");
    Ok(match name {
        "heads-majority" => Hypothesis::sub_basic(heads()?, ratio(1, 2))?,
        "heads-at-most-half" => weakverify::hypotheses::at_most(&heads()?, ratio(1, 2))?,
        "fair-band" => Hypothesis::band(heads()?, ratio(3, 10), ratio(7, 10))?,
        other => bail!("unknown hypothesis `{other}`"),
    })
}

pub fn partition(space: &Arc<SampleSpace>, name: &str) -> Result<Partition> {
    match name {
        "three-cell-bias" => Ok(three_cell_partition(&Event::parse(space, "{H}")?)?),
        other => bail!("unknown partition `{other}`"),
    }
}

pub fn presentation(name: &str) -> Result<LocallyClosedPresentation> {
    Ok(match name {
        "constantly-zero" => constantly_zero(),
        "eventually-zero" => eventually_zero(),
        "some-zero" => some_zero(),
        "no-zeros" => no_zeros(),
        other => bail!("unknown propositional hypothesis `{other}`"),
    })
}

pub fn prop_partition(name: &str) -> Result<Vec<(String, LocallyClosedPresentation)>> {
    match name {
        "zero-or-not" => Ok(zero_or_not()),
        other => bail!("unknown propositional partition `{other}`"),
    }
}
