use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::measures::event::{Event, EventForm};
use crate::measures::space::SampleSpace;
use crate::measures::world::World;

/// Outcomes of repeated sampling: symbol indices or reals.
#[derive(Debug, Clone, PartialEq)]
pub enum Points {
    Symbols(Vec<u32>),
    Reals(Vec<f64>),
}

impl Points {
    pub fn len(&self) -> usize {
        match self {
            Points::Symbols(v) => v.len(),
            Points::Reals(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Running counts: entry `n` is the number of the first `n` points in
    /// the event.
    pub(crate) fn prefix_counts(&self, event: &Event) -> Vec<u32> {
        let mut counts = Vec::with_capacity(self.len() + 1);
        counts.push(0u32);
        let mut acc = 0u32;
        match (self, event.form()) {
            (Points::Symbols(v), EventForm::Symbols(mask)) => {
                for s in v {
                    acc += mask[*s as usize] as u32;
                    counts.push(acc);
                }
            }
            (Points::Reals(v), EventForm::Real(set)) => {
                for x in v {
                    acc += set.contains_f64(*x) as u32;
                    counts.push(acc);
                }
            }
            _ => counts.resize(self.len() + 1, 0),
        }
        counts
    }
}

/// An i.i.d. sample together with the seed that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleVector {
    pub space: Arc<SampleSpace>,
    pub points: Points,
    pub master_seed: u64,
    pub trial: u64,
}

impl SampleVector {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// A hand-written sample over an alphabet, e.g. `"HHTH"` over the coin.
    pub fn from_symbols(space: &Arc<SampleSpace>, symbols: &[&str]) -> Result<Self> {
        let idx = symbols
            .iter()
            .map(|s| {
                space
                    .symbol_index(s)
                    .map(|i| i as u32)
                    .ok_or_else(|| Error::InvalidEvent(format!("unknown symbol `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SampleVector { space: space.clone(), points: Points::Symbols(idx), master_seed: 0, trial: 0 })
    }

    pub fn from_reals(points: Vec<f64>) -> Result<Self> {
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidEvent("sample points must be finite".into()));
        }
        Ok(SampleVector { space: SampleSpace::real_line(), points: Points::Reals(points), master_seed: 0, trial: 0 })
    }

    /// The first `n` points, keeping the space, seed and trial index.
    pub fn prefix(&self, n: usize) -> SampleVector {
        let points = match &self.points {
            Points::Symbols(v) => Points::Symbols(v[..n.min(v.len())].to_vec()),
            Points::Reals(v) => Points::Reals(v[..n.min(v.len())].to_vec()),
        };
        SampleVector { points, ..self.clone() }
    }
}

/// Draws `n` points. The generator is ChaCha keyed by `master_seed` with the
/// trial index as stream and the draw index as block counter, so draws are
/// independent of evaluation order and extend prefix-consistently.
pub(crate) fn draw_points(world: &World, n: usize, master_seed: u64, trial: u64) -> Points {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    let mut uniform = move || (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    if world.space().is_finite() {
        Points::Symbols((0..n).map(|_| world.symbol_from_uniform(uniform())).collect())
    } else {
        Points::Reals((0..n).map(|_| world.real_from_uniform(uniform())).collect())
    }
}

pub fn sample(world: &World, n: usize, seed: u64) -> Result<SampleVector> {
    sample_trial(world, n, seed, 0)
}

pub fn sample_trial(world: &World, n: usize, master_seed: u64, trial: u64) -> Result<SampleVector> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    Ok(SampleVector {
        space: world.space().clone(),
        points: draw_points(world, n, master_seed, trial),
        master_seed,
        trial,
    })
}

/// Number of sample points falling in the event.
pub fn empirical_count(sample: &SampleVector, event: &Event) -> Result<usize> {
    if sample.space != *event.space() {
        return Err(Error::SpaceMismatch);
    }
    Ok(*sample.points.prefix_counts(event).last().unwrap() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn degenerate_coin_always_heads() {
        let w = World::bernoulli(ratio(1, 1)).unwrap();
        let s = sample(&w, 5, 99).unwrap();
        assert_eq!(s.points, Points::Symbols(vec![0; 5]));
    }

    #[test]
    fn counts_by_hand() {
        let coin = SampleSpace::coin();
        let s = SampleVector::from_symbols(&coin, &["H", "H", "T", "H"]).unwrap();
        assert_eq!(empirical_count(&s, &Event::parse(&coin, "{H}").unwrap()).unwrap(), 3);
        assert_eq!(empirical_count(&s, &Event::empty(&coin)).unwrap(), 0);
        let r = SampleVector::from_reals(vec![0.1, 0.5, 0.9]).unwrap();
        let e = Event::parse(&SampleSpace::real_line(), "(1/4, 3/4)").unwrap();
        assert_eq!(empirical_count(&r, &e).unwrap(), 1);
        assert_eq!(empirical_count(&r, &Event::parse(&coin, "{H}").unwrap()), Err(Error::SpaceMismatch));
    }

    #[test]
    fn zero_length_sample_is_rejected() {
        let w = World::bernoulli(ratio(1, 2)).unwrap();
        assert_eq!(sample(&w, 0, 1), Err(Error::EmptySample));
    }

    #[test]
    fn trials_use_distinct_streams() {
        let w = World::bernoulli(ratio(1, 2)).unwrap();
        let a = sample_trial(&w, 64, 5, 0).unwrap();
        let b = sample_trial(&w, 64, 5, 1).unwrap();
        assert_ne!(a.points, b.points);
    }

    #[test]
    fn uniform_samples_stay_in_support() {
        let w = World::uniform(ratio(2, 1), ratio(3, 1)).unwrap();
        let s = sample(&w, 1000, 3).unwrap();
        match s.points {
            Points::Reals(v) => assert!(v.iter().all(|x| (2.0..=3.0).contains(x))),
            _ => panic!("expected reals"),
        }
    }
}
