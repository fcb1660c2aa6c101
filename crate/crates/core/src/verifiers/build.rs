use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hypotheses::{band_as_intersection, FSigma, Hypothesis, Partition};
use crate::measures::{Event, SampleSpace};
use crate::rational::Rational;
use crate::verifiers::family::{intern, Kind, LazyChildren, SolverParts, VerifierFamily};
use crate::verifiers::threshold::{Level, ThresholdSchedule};

/// A map `ℕ → ℕ × ℕ` (both sides 1-based) used to interleave answers and
/// their pieces.
pub trait Pairing: Send + Sync {
    fn unpair(&self, k: usize) -> (usize, usize);
}

/// Cantor unpairing along anti-diagonals:
/// `1 ↦ (1,1), 2 ↦ (1,2), 3 ↦ (2,1), 4 ↦ (1,3), …`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CantorPairing;

impl Pairing for CantorPairing {
    fn unpair(&self, k: usize) -> (usize, usize) {
        assert!(k >= 1, "pairing is 1-based");
        // diagonal d holds indices d(d-1)/2 + 1 ..= d(d+1)/2
        let mut d = (((8.0 * k as f64).sqrt() - 1.0) / 2.0) as usize;
        while d * (d + 1) / 2 < k {
            d += 1;
        }
        while d > 1 && (d - 1) * d / 2 >= k {
            d -= 1;
        }
        let offset = k - (d - 1) * d / 2;
        (offset, d + 1 - offset)
    }
}

/// Rejects pairings that miss a pair `(i, j)` with `i + j ≤ 6` among their
/// first 4096 values.
pub fn check_pairing(pairing: &dyn Pairing) -> Result<()> {
    let seen: HashSet<(usize, usize)> = (1..=4096).map(|k| pairing.unpair(k)).collect();
    for i in 1..6 {
        for j in 1..=6 - i {
            if !seen.contains(&(i, j)) {
                return Err(Error::NonSurjectivePairing(format!("({i},{j}) never appears")));
            }
        }
    }
    Ok(())
}

/// Accepts `μ(A) > b` once the count of `A` reaches `⌈n(b + t_n)⌉`.
pub fn subbasic_verifier(h: &Hypothesis, alpha: &Level) -> Result<VerifierFamily> {
    let Hypothesis::SubBasic { event, threshold } = h else {
        return Err(Error::InvalidHypothesis(format!("`{h}` is not sub-basic")));
    };
    Ok(VerifierFamily {
        space: event.space().clone(),
        target: Some(h.clone()),
        label: h.to_string(),
        alpha: alpha.clone(),
        kind: Kind::Hoeffding {
            event: event.clone(),
            id: intern(event),
            schedule: ThresholdSchedule::new(threshold.clone(), alpha.clone())?,
        },
    })
}

/// Accepts the intersection when both conjuncts accept.
pub fn conjoin(v1: VerifierFamily, v2: VerifierFamily) -> Result<VerifierFamily> {
    if v1.space != v2.space {
        return Err(Error::SpaceMismatch);
    }
    if v1.alpha != v2.alpha {
        return Err(Error::AlphaMismatch(v1.alpha.to_string(), v2.alpha.to_string()));
    }
    let target = match (&v1.target, &v2.target) {
        (Some(a), Some(b)) => Some(Hypothesis::And(vec![a.clone(), b.clone()])),
        _ => None,
    };
    Ok(VerifierFamily {
        space: v1.space.clone(),
        label: format!("({} and {})", v1.label, v2.label),
        target,
        alpha: v1.alpha.clone(),
        kind: Kind::Conjunction(Arc::new(v1), Arc::new(v2)),
    })
}

/// Accepts the union at `n` when some disjunct `i ≤ n` accepts. Disjunct `i`
/// is built on first use by `build(i, α/2^i)`; `len` bounds a finite union.
pub fn disjoin(
    space: Arc<SampleSpace>,
    label: impl Into<String>,
    target: Option<Hypothesis>,
    len: Option<usize>,
    alpha: &Level,
    build: impl Fn(usize, Level) -> Result<VerifierFamily> + Send + Sync + 'static,
) -> Result<VerifierFamily> {
    if len == Some(0) {
        return Err(Error::InvalidHypothesis("empty disjunction".into()));
    }
    let base = alpha.clone();
    let child_space = space.clone();
    let build = move |i: usize| {
        let level = base.halved(u32::try_from(i).unwrap_or(u32::MAX));
        let child = build(i, level.clone())?;
        if child.space != child_space {
            return Err(Error::SpaceMismatch);
        }
        if child.alpha != level {
            return Err(Error::AlphaMismatch(child.alpha.to_string(), level.to_string()));
        }
        Ok(child)
    };
    Ok(VerifierFamily {
        space,
        target,
        label: label.into(),
        alpha: alpha.clone(),
        kind: Kind::Disjunction(LazyChildren::new(len, Box::new(build))),
    })
}

/// Compiles an open-form hypothesis into an almost-sure verifier.
pub fn verifier_for_open(h: &Hypothesis, alpha: &Level) -> Result<VerifierFamily> {
    match h {
        Hypothesis::SubBasic { .. } => subbasic_verifier(h, alpha),
        Hypothesis::Band { event, lower, upper } => {
            let and = band_as_intersection(event, lower.clone(), upper.clone())?;
            let mut v = verifier_for_open(&and, alpha)?;
            v.target = Some(h.clone());
            v.label = h.to_string();
            Ok(v)
        }
        Hypothesis::And(children) => {
            let mut acc = verifier_for_open(&children[0], alpha)?;
            for c in &children[1..] {
                acc = conjoin(acc, verifier_for_open(c, alpha)?)?;
            }
            acc.target = Some(h.clone());
            acc.label = h.to_string();
            Ok(acc)
        }
        Hypothesis::Or(children) => {
            let space = h.space();
            for c in children {
                if c.space() != space {
                    return Err(Error::SpaceMismatch);
                }
            }
            let parts = children.clone();
            disjoin(space, h.to_string(), Some(h.clone()), Some(parts.len()), alpha, move |i, level| {
                verifier_for_open(&parts[i - 1], &level)
            })
        }
        Hypothesis::ClosedComplement(_) | Hypothesis::FSigma(_) => {
            Err(Error::InvalidHypothesis(format!("`{h}` is not open")))
        }
    }
}

fn closed_pieces(h: &Hypothesis) -> Result<FSigma> {
    match h {
        Hypothesis::FSigma(f) => Ok(f.clone()),
        Hypothesis::ClosedComplement(_) => FSigma::finite(h.to_string(), vec![h.clone()]),
        other => Err(Error::InvalidHypothesis(format!("`{other}` is not presented as a union of closed pieces"))),
    }
}

fn complement_verifiers(pieces: FSigma, alpha: &Level) -> LazyChildren {
    let alpha = alpha.clone();
    let len = pieces.distinct_len();
    LazyChildren::new(
        len,
        Box::new(move |j| match pieces.piece(j) {
            Hypothesis::ClosedComplement(open) => verifier_for_open(&open, &alpha),
            other => Err(Error::InvalidHypothesis(format!("piece `{other}` is not closed"))),
        }),
    )
}

/// Outputs `C_j` for the least `j ≤ n` whose complement verifier does not
/// accept, `Continue` if every such verifier accepts.
pub fn limiting_verifier(h: &Hypothesis, alpha: &Level) -> Result<VerifierFamily> {
    let pieces = closed_pieces(h)?;
    let first = pieces.piece(1);
    first.validate()?;
    Ok(VerifierFamily {
        space: first.space(),
        label: h.to_string(),
        target: Some(Hypothesis::FSigma(pieces.clone())),
        alpha: alpha.clone(),
        kind: Kind::Limiting(complement_verifiers(pieces, alpha)),
    })
}

/// Scans `k = 1..n`, `(i, j) = f(k)`, and outputs answer `i` at the first
/// piece `C_ij` whose complement verifier does not accept.
pub fn solver(q: &Partition, alpha: &Level, pairing: Arc<dyn Pairing>) -> Result<VerifierFamily> {
    check_pairing(pairing.as_ref())?;
    let space = q.answers()[0].space();
    let mut pieces = Vec::with_capacity(q.answers().len());
    for a in q.answers() {
        if a.space() != space {
            return Err(Error::SpaceMismatch);
        }
        pieces.push(complement_verifiers(closed_pieces(a)?, alpha));
    }
    Ok(VerifierFamily {
        space,
        target: None,
        label: format!("solver[{}]", q.labels().join(" | ")),
        alpha: alpha.clone(),
        kind: Kind::Solver(Box::new(SolverParts { partition: q.clone(), pieces, pairing })),
    })
}

/// The hypothesis `W`, as the closed complement of `μ(∅) > 0`.
pub fn whole_hypothesis(space: &Arc<SampleSpace>) -> Result<Hypothesis> {
    let never = Hypothesis::sub_basic(Event::empty(space), Rational::from_integer(0.into()))?;
    Hypothesis::closed_complement(never)
}
