use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::measures::event::{Event, EventForm};
use crate::measures::space::SampleSpace;
use crate::rational::{show, to_f64, Rational};

/// Polynomial density `Σ c_k x^k` on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityPiece {
    pub lo: Rational,
    pub hi: Rational,
    pub coeffs: Vec<Rational>,
}

impl DensityPiece {
    /// Exact antiderivative vanishing at zero.
    fn antiderivative(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        let mut power = x.clone();
        for (k, c) in self.coeffs.iter().enumerate() {
            acc += c * &power / Rational::from_integer((k as i64 + 1).into());
            power *= x;
        }
        acc
    }

    /// Mass of the piece inside the open interval `(lo, hi)`; `None` bounds
    /// are infinite.
    fn mass_between(&self, lo: Option<&Rational>, hi: Option<&Rational>) -> Rational {
        let a = match lo {
            Some(l) if *l > self.lo => l.clone(),
            _ => self.lo.clone(),
        };
        let b = match hi {
            Some(h) if *h < self.hi => h.clone(),
            _ => self.hi.clone(),
        };
        if a >= b {
            return Rational::zero();
        }
        self.antiderivative(&b) - self.antiderivative(&a)
    }

    fn density_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }
}

/// A point mass on the real line.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub at: Rational,
    pub mass: Rational,
}

#[derive(Debug, Clone, PartialEq)]
enum Law {
    Categorical { probs: Vec<Rational>, cumulative: Vec<f64> },
    Continuous(RealLaw),
}

#[derive(Debug, Clone, PartialEq)]
struct RealLaw {
    pieces: Vec<DensityPiece>,
    atoms: Vec<Atom>,
    sampler: RealSampler,
}

/// Float tables for inverse-CDF sampling: atoms first, then density pieces.
#[derive(Debug, Clone, PartialEq)]
struct RealSampler {
    atom_points: Vec<f64>,
    cumulative: Vec<f64>,
    pieces: Vec<(f64, f64, Vec<f64>)>,
}

/// A probability measure on a sample space.
#[derive(Debug, Clone, PartialEq)]
pub struct World {
    space: Arc<SampleSpace>,
    law: Law,
    label: String,
}

fn check_total(total: &Rational) -> Result<()> {
    let tol = Rational::new(1.into(), 1_000_000_000_000i64.into());
    if (total - Rational::one()).abs() > tol {
        return Err(Error::InvalidWorld(format!("total mass is {}, not 1", to_f64(total))));
    }
    Ok(())
}

fn cumulate(masses: impl Iterator<Item = f64>) -> Vec<f64> {
    masses
        .scan(0.0, |acc, m| {
            *acc += m;
            Some(*acc)
        })
        .collect()
}

impl World {
    pub fn categorical(space: &Arc<SampleSpace>, probs: Vec<Rational>, label: impl Into<String>) -> Result<Self> {
        let symbols =
            space.symbols().ok_or_else(|| Error::InvalidWorld("categorical law needs a finite alphabet".into()))?;
        if symbols.len() != probs.len() {
            return Err(Error::InvalidWorld(format!("{} probabilities for {} symbols", probs.len(), symbols.len())));
        }
        if probs.iter().any(Signed::is_negative) {
            return Err(Error::InvalidWorld("negative probability".into()));
        }
        check_total(&probs.iter().sum())?;
        let cumulative = cumulate(probs.iter().map(to_f64));
        Ok(World { space: space.clone(), law: Law::Categorical { probs, cumulative }, label: label.into() })
    }

    /// A coin with `P(H) = p`.
    pub fn bernoulli(p: Rational) -> Result<Self> {
        let label = format!("Bernoulli({})", show(&p));
        let q = Rational::one() - &p;
        Self::categorical(&SampleSpace::coin(), vec![p, q], label)
    }

    pub fn piecewise(mut pieces: Vec<DensityPiece>, atoms: Vec<Atom>, label: impl Into<String>) -> Result<Self> {
        pieces.sort_by(|a, b| a.lo.cmp(&b.lo));
        for p in &pieces {
            if p.lo >= p.hi {
                return Err(Error::InvalidWorld("density piece with lo >= hi".into()));
            }
            if p.coeffs.is_empty() {
                return Err(Error::InvalidWorld("density piece without coefficients".into()));
            }
            let (lo, hi) = (to_f64(&p.lo), to_f64(&p.hi));
            let negative = (0..=256).map(|i| lo + (hi - lo) * i as f64 / 256.0).any(|x| p.density_f64(x) < -1e-12);
            if negative {
                return Err(Error::InvalidWorld("density takes negative values".into()));
            }
        }
        if pieces.windows(2).any(|w| w[0].hi > w[1].lo) {
            return Err(Error::InvalidWorld("density pieces overlap".into()));
        }
        for (i, a) in atoms.iter().enumerate() {
            if a.mass.is_negative() {
                return Err(Error::InvalidWorld("negative atom mass".into()));
            }
            if atoms[..i].iter().any(|b| b.at == a.at) {
                return Err(Error::InvalidWorld(format!("duplicate atom at {}", show(&a.at))));
            }
        }
        let piece_masses: Vec<Rational> = pieces.iter().map(|p| p.mass_between(None, None)).collect();
        let total: Rational = piece_masses.iter().sum::<Rational>() + atoms.iter().map(|a| &a.mass).sum::<Rational>();
        check_total(&total)?;
        let sampler = RealSampler {
            atom_points: atoms.iter().map(|a| to_f64(&a.at)).collect(),
            cumulative: cumulate(atoms.iter().map(|a| to_f64(&a.mass)).chain(piece_masses.iter().map(to_f64))),
            pieces: pieces
                .iter()
                .map(|p| (to_f64(&p.lo), to_f64(&p.hi), p.coeffs.iter().map(to_f64).collect()))
                .collect(),
        };
        Ok(World {
            space: SampleSpace::real_line(),
            law: Law::Continuous(RealLaw { pieces, atoms, sampler }),
            label: label.into(),
        })
    }

    pub fn uniform(lo: Rational, hi: Rational) -> Result<Self> {
        Self::uniform_with_atoms(lo, hi, vec![])
    }

    /// Uniform density on `[lo, hi]` carrying whatever mass the atoms leave.
    pub fn uniform_with_atoms(lo: Rational, hi: Rational, atoms: Vec<Atom>) -> Result<Self> {
        if lo >= hi {
            return Err(Error::InvalidWorld("uniform law needs lo < hi".into()));
        }
        let rest = Rational::one() - atoms.iter().map(|a| &a.mass).sum::<Rational>();
        let mut label = format!("Uniform[{}, {}]", show(&lo), show(&hi));
        for a in &atoms {
            label.push_str(&format!(" + {}@{}", show(&a.mass), show(&a.at)));
        }
        let density = rest / (&hi - &lo);
        Self::piecewise(vec![DensityPiece { lo, hi, coeffs: vec![density] }], atoms, label)
    }

    pub fn space(&self) -> &Arc<SampleSpace> {
        &self.space
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn atoms(&self) -> &[Atom] {
        match &self.law {
            Law::Continuous(law) => &law.atoms,
            Law::Categorical { .. } => &[],
        }
    }

    /// Symbol probabilities of a categorical law.
    pub fn probabilities(&self) -> Option<&[Rational]> {
        match &self.law {
            Law::Categorical { probs, .. } => Some(probs),
            Law::Continuous(_) => None,
        }
    }

    /// Maps a uniform draw in `[0, 1)` to an outcome: a symbol index or a real.
    pub(crate) fn symbol_from_uniform(&self, u: f64) -> u32 {
        match &self.law {
            Law::Categorical { cumulative, .. } => {
                let i = cumulative.partition_point(|c| *c <= u);
                i.min(cumulative.len() - 1) as u32
            }
            Law::Continuous(_) => unreachable!("real-line world"),
        }
    }

    pub(crate) fn real_from_uniform(&self, u: f64) -> f64 {
        let s = match &self.law {
            Law::Continuous(law) => &law.sampler,
            Law::Categorical { .. } => unreachable!("finite world"),
        };
        let last = s.cumulative.len() - 1;
        let i = s.cumulative.partition_point(|c| *c <= u).min(last);
        if i < s.atom_points.len() {
            return s.atom_points[i];
        }
        let prev = if i == 0 { 0.0 } else { s.cumulative[i - 1] };
        let (lo, hi, coeffs) = &s.pieces[i - s.atom_points.len()];
        let cdf = |x: f64| {
            let mut acc = 0.0;
            let mut power = x;
            for (k, c) in coeffs.iter().enumerate() {
                acc += c * power / (k as f64 + 1.0);
                power *= x;
            }
            acc
        };
        let target = cdf(*lo) + (u - prev);
        let (mut a, mut b) = (*lo, *hi);
        for _ in 0..80 {
            let mid = 0.5 * (a + b);
            if cdf(mid) < target {
                a = mid;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    }
}

impl fmt::Display for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Exact probability of an event under a world.
pub fn prob(world: &World, event: &Event) -> Result<Rational> {
    if world.space != *event.space() {
        return Err(Error::SpaceMismatch);
    }
    match (&world.law, event.form()) {
        (Law::Categorical { probs, .. }, EventForm::Symbols(mask)) => {
            Ok(probs.iter().zip(mask).filter(|(_, m)| **m).map(|(p, _)| p).sum())
        }
        (Law::Continuous(law), EventForm::Real(set)) => {
            let cuts = set.endpoints();
            let mut total = Rational::zero();
            for (i, inside) in set.gap_membership().iter().enumerate() {
                if !inside {
                    continue;
                }
                let lo = i.checked_sub(1).map(|j| &cuts[j]);
                let hi = cuts.get(i);
                total += law.pieces.iter().map(|p| p.mass_between(lo, hi)).sum::<Rational>();
            }
            total += law.atoms.iter().filter(|a| set.contains_rational(&a.at)).map(|a| &a.mass).sum::<Rational>();
            Ok(total)
        }
        _ => Err(Error::SpaceMismatch),
    }
}

/// True iff the boundary of the event carries no mass under the world.
pub fn is_feasible(world: &World, event: &Event) -> Result<bool> {
    if world.space != *event.space() {
        return Err(Error::SpaceMismatch);
    }
    let endpoints = event.endpoints();
    Ok(!world.atoms().iter().any(|a| a.mass.is_positive() && endpoints.binary_search(&a.at).is_ok()))
}

pub(crate) fn require_feasible(world: &World, event: &Event) -> Result<()> {
    if is_feasible(world, event)? {
        Ok(())
    } else {
        Err(Error::NotContinuitySet(format!("{event} has an atom of {world} on its boundary")))
    }
}
