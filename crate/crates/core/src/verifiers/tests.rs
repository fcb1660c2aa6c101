use std::sync::Arc;

use super::*;
use crate::hypotheses::{at_most, closed_band, FSigma, Hypothesis, Partition};
use crate::measures::{Event, SampleSpace, SampleVector, World};
use crate::rational::{ratio, Rational};

fn coin() -> Arc<SampleSpace> {
    SampleSpace::coin()
}

fn heads() -> Event {
    Event::parse(&coin(), "{H}").unwrap()
}

fn alpha() -> Level {
    Level::new(ratio(1, 20)).unwrap()
}

fn tosses(heads: usize, tails: usize) -> SampleVector {
    let mut s = vec!["H"; heads];
    s.extend(vec!["T"; tails]);
    SampleVector::from_symbols(&coin(), &s).unwrap()
}

fn above(b: Rational) -> Hypothesis {
    Hypothesis::sub_basic(heads(), b).unwrap()
}

const ACCEPT: Verdict = Verdict::Accept(Payload::Target);

#[test]
fn subbasic_counts_against_threshold() {
    let v = subbasic_verifier(&above(ratio(1, 2)), &alpha()).unwrap();
    assert_eq!(v.construction(), Construction::Hoeffding);
    assert_eq!(v.test_at(&tosses(80, 20)).unwrap(), ACCEPT);
    assert_eq!(v.test_at(&tosses(76, 24)).unwrap(), ACCEPT);
    assert_eq!(v.test_at(&tosses(75, 25)).unwrap(), Verdict::Continue);
    assert_eq!(v.test_at(&tosses(60, 40)).unwrap(), Verdict::Continue);
    let never = Hypothesis::sub_basic(Event::empty(&coin()), ratio(0, 1)).unwrap();
    let v = subbasic_verifier(&never, &alpha()).unwrap();
    for n in 1..50 {
        assert_eq!(v.test_at(&tosses(n, 0)).unwrap(), Verdict::Continue);
    }
    assert!(subbasic_verifier(&at_most(&heads(), ratio(1, 2)).unwrap(), &alpha()).is_err());
}

#[test]
fn test_at_rejects_foreign_samples() {
    let v = subbasic_verifier(&above(ratio(1, 2)), &alpha()).unwrap();
    let reals = SampleVector::from_reals(vec![0.5]).unwrap();
    assert_eq!(v.test_at(&reals).unwrap_err(), crate::error::Error::SpaceMismatch);
}

#[test]
fn conjunction_needs_both() {
    let a = subbasic_verifier(&above(ratio(1, 2)), &alpha()).unwrap();
    let b = subbasic_verifier(&above(ratio(0, 1)), &alpha()).unwrap();
    let v = conjoin(a, b).unwrap();
    assert_eq!(v.test_at(&tosses(100, 0)).unwrap(), ACCEPT);
    assert_eq!(v.test_at(&tosses(60, 40)).unwrap(), Verdict::Continue);
    let tails = Hypothesis::sub_basic(heads().complement(), ratio(1, 2)).unwrap();
    let c = conjoin(
        subbasic_verifier(&above(ratio(1, 2)), &alpha()).unwrap(),
        subbasic_verifier(&tails, &alpha()).unwrap(),
    )
    .unwrap();
    assert_eq!(c.test_at(&tosses(100, 0)).unwrap(), Verdict::Continue);
    let other = subbasic_verifier(&above(ratio(1, 2)), &alpha().halved(1)).unwrap();
    let same = subbasic_verifier(&above(ratio(1, 2)), &alpha()).unwrap();
    assert!(matches!(conjoin(same, other), Err(crate::error::Error::AlphaMismatch(..))));
}

#[test]
fn disjunction_delays_by_index() {
    // only the third disjunct can ever accept
    let v = disjoin(coin(), "third", None, Some(5), &alpha(), |i, level| {
        let h = if i == 3 {
            Hypothesis::sub_basic(Event::whole(&coin()), ratio(0, 1)).unwrap()
        } else {
            Hypothesis::sub_basic(Event::empty(&coin()), ratio(0, 1)).unwrap()
        };
        subbasic_verifier(&h, &level)
    })
    .unwrap();
    let third =
        subbasic_verifier(&Hypothesis::sub_basic(Event::whole(&coin()), ratio(0, 1)).unwrap(), &alpha().halved(3))
            .unwrap();
    for n in 1..40 {
        let s = tosses(n, 0);
        let expected = if n >= 3 { third.test_at(&s).unwrap() } else { Verdict::Continue };
        assert_eq!(v.test_at(&s).unwrap(), expected, "n={n}");
    }
    assert!(v.test_at(&tosses(39, 0)).unwrap().is_accept());
}

#[test]
fn single_disjunct_uses_half_alpha() {
    let or = Hypothesis::or(vec![above(ratio(1, 2))]).unwrap();
    let v = verifier_for_open(&or, &alpha()).unwrap();
    let half = subbasic_verifier(&above(ratio(1, 2)), &alpha().halved(1)).unwrap();
    for h in 0..=200 {
        let s = tosses(h, 200 - h);
        assert_eq!(v.test_at(&s).unwrap(), half.test_at(&s).unwrap());
    }
}

#[test]
fn open_compilation_rejects_closed() {
    let closed = at_most(&heads(), ratio(1, 2)).unwrap();
    assert!(verifier_for_open(&closed, &alpha()).is_err());
    let band = Hypothesis::band(heads(), ratio(3, 10), ratio(7, 10)).unwrap();
    let v = verifier_for_open(&band, &alpha()).unwrap();
    assert_eq!(v.construction(), Construction::Conjunction);
    assert_eq!(v.target().unwrap().to_string(), band.to_string());
}

#[test]
fn limiting_prefers_least_piece() {
    // C1 ⊇ C2: μ(H) ≤ 3/4 and μ(H) ≤ 1/2
    let pieces = FSigma::finite(
        "nested",
        vec![at_most(&heads(), ratio(3, 4)).unwrap(), at_most(&heads(), ratio(1, 2)).unwrap()],
    )
    .unwrap();
    let v = limiting_verifier(&Hypothesis::FSigma(pieces), &alpha()).unwrap();
    let w = World::bernoulli(ratio(2, 5)).unwrap();
    let out = run(&v, &w, 500, 7).unwrap();
    assert!(out.iter().all(|o| *o == Verdict::Accept(Payload::Piece(1))));
    // all heads: C1's complement verifier accepts eventually, then C2's
    let v1 = run(&v, &World::bernoulli(ratio(1, 1)).unwrap(), 400, 7).unwrap();
    assert_eq!(v1[0], Verdict::Accept(Payload::Piece(1)));
    assert_eq!(v1[399], Verdict::Continue);
    assert!(v1.iter().all(|o| *o != Verdict::Accept(Payload::Piece(3))));
}

#[test]
fn cantor_prefix() {
    let f = CantorPairing;
    let got: Vec<_> = (1..=10).map(|k| f.unpair(k)).collect();
    assert_eq!(got, vec![(1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (3, 1), (1, 4), (2, 3), (3, 2), (4, 1)]);
    struct FirstRow;
    impl Pairing for FirstRow {
        fn unpair(&self, k: usize) -> (usize, usize) {
            (1, k)
        }
    }
    assert!(check_pairing(&CantorPairing).is_ok());
    assert!(matches!(check_pairing(&FirstRow), Err(crate::error::Error::NonSurjectivePairing(_))));
}

#[test]
fn trivial_partition_answers_at_once() {
    let w = whole_hypothesis(&coin()).unwrap();
    let q = Partition::new(vec![w], vec!["W".into()]).unwrap();
    let v = solver(&q, &alpha(), Arc::new(CantorPairing)).unwrap();
    let out = run(&v, &World::bernoulli(ratio(1, 3)).unwrap(), 20, 1).unwrap();
    assert!(out.iter().all(|o| *o == Verdict::Accept(Payload::Answer(1))));
    assert_eq!(v.payload_label(Payload::Answer(1)), "W");
}

#[test]
fn solver_payloads_are_answers() {
    let q = crate::hypotheses::three_cell_partition(&heads()).unwrap();
    let v = solver(&q, &alpha(), Arc::new(CantorPairing)).unwrap();
    let out = run(&v, &World::bernoulli(ratio(1, 2)).unwrap(), 300, 3).unwrap();
    assert!(out.iter().all(|o| matches!(o, Verdict::Continue | Verdict::Accept(Payload::Answer(1..=3)))));
    let band = closed_band(&heads(), ratio(1, 2), ratio(1, 2)).unwrap();
    assert_eq!(v.payload_hypothesis(Payload::Answer(2)).unwrap().to_string(), q.answers()[1].to_string());
    assert!(band.to_string().starts_with("not"));
}

#[test]
fn degenerate_coin_accepts_once_threshold_fits() {
    let v = subbasic_verifier(&above(ratio(1, 2)), &alpha()).unwrap();
    let out = run(&v, &World::bernoulli(ratio(1, 1)).unwrap(), 60, 11).unwrap();
    let first =
        (1..=60u64).find(|&n| hoeffding_threshold(n, &ratio(1, 2), &ratio(1, 20)).unwrap() <= n).unwrap() as usize;
    for (i, o) in out.iter().enumerate() {
        assert_eq!(o.is_accept(), i + 1 >= first, "n={}", i + 1);
    }
    assert_eq!(out, run(&v, &World::bernoulli(ratio(1, 1)).unwrap(), 60, 11).unwrap());
    assert_eq!(run(&v, &World::bernoulli(ratio(1, 2)).unwrap(), 1, 5).unwrap(), vec![Verdict::Continue]);
}
