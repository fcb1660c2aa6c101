use std::sync::Arc;

use proptest::prelude::*;
use weakverify::measures::{Endpoint, Interval, RealSet};
use weakverify::rational::{ratio, Rational};
use weakverify::{empirical_count, is_feasible, prob, sample, Atom, Event, SampleSpace, SampleVector, World};

fn quarter(k: i64) -> Rational {
    ratio(k, 4)
}

fn endpoint(k: i64, closed: bool) -> Endpoint {
    if closed {
        Endpoint::Closed(quarter(k))
    } else {
        Endpoint::Open(quarter(k))
    }
}

prop_compose! {
    fn interval()(a in -8i64..8, len in 0i64..6, lc: bool, hc: bool) -> Interval {
        let hi = a + len;
        // a degenerate interval must be closed on both sides to be nonempty
        let (lc, hc) = if len == 0 { (true, true) } else { (lc, hc) };
        Interval { lo: endpoint(a, lc), hi: endpoint(hi, hc) }
    }
}

fn real_set() -> impl Strategy<Value = RealSet> {
    prop::collection::vec(interval(), 0..4).prop_map(|v| RealSet::from_intervals(v).unwrap())
}

fn real_event() -> impl Strategy<Value = Event> {
    real_set().prop_map(|s| Event::real(&SampleSpace::real_line(), s).unwrap())
}

fn three() -> Arc<SampleSpace> {
    SampleSpace::finite(["a", "b", "c"]).unwrap()
}

fn finite_event() -> impl Strategy<Value = Event> {
    prop::collection::vec(any::<bool>(), 3).prop_map(|m| Event::from_mask(&three(), m).unwrap())
}

/// Grid of eighths: covers every endpoint and every gap midpoint.
fn grid() -> impl Iterator<Item = Rational> {
    (-40..=40).map(|k| ratio(k, 8))
}

fn atomic_uniform() -> World {
    // atoms at odd eighths never touch an endpoint in quarters
    World::uniform_with_atoms(
        ratio(-2, 1),
        ratio(2, 1),
        vec![Atom { at: ratio(1, 8), mass: ratio(1, 10) }, Atom { at: ratio(-5, 8), mass: ratio(1, 5) }],
    )
    .unwrap()
}

proptest! {
    #[test]
    fn real_algebra_is_closed_and_feasible(a in real_event(), b in real_event()) {
        let w = atomic_uniform();
        prop_assert!(is_feasible(&w, &a).unwrap() && is_feasible(&w, &b).unwrap());
        for e in [a.union(&b).unwrap(), a.intersection(&b).unwrap(), a.complement()] {
            prop_assert!(is_feasible(&w, &e).unwrap());
            let p = prob(&w, &e).unwrap();
            prop_assert!(p >= ratio(0, 1) && p <= ratio(1, 1));
        }
    }

    #[test]
    fn finite_algebra_is_closed(a in finite_event(), b in finite_event()) {
        let w = World::categorical(&three(), vec![ratio(1, 2), ratio(1, 3), ratio(1, 6)], "w").unwrap();
        for e in [a.union(&b).unwrap(), a.intersection(&b).unwrap(), a.complement()] {
            prop_assert!(is_feasible(&w, &e).unwrap());
        }
        let u = a.union(&b).unwrap();
        for i in 0..3 {
            prop_assert_eq!(u.contains_symbol(i), a.contains_symbol(i) || b.contains_symbol(i));
        }
    }

    #[test]
    fn union_endpoints_come_from_operands(a in real_event(), b in real_event()) {
        let u = a.union(&b).unwrap();
        for x in u.endpoints() {
            prop_assert!(a.endpoints().contains(x) || b.endpoints().contains(x));
        }
    }

    #[test]
    fn prob_is_additive(a in real_event(), b in real_event()) {
        let w = atomic_uniform();
        let rest = b.difference(&a).unwrap();
        let whole = a.union(&rest).unwrap();
        let lhs = prob(&w, &whole).unwrap();
        let rhs = prob(&w, &a).unwrap() + prob(&w, &rest).unwrap();
        prop_assert_eq!(lhs, rhs);
        let c = World::categorical(&three(), vec![ratio(1, 7), ratio(2, 7), ratio(4, 7)], "c").unwrap();
        let fa = Event::from_mask(&three(), vec![true, false, false]).unwrap();
        let fb = Event::from_mask(&three(), vec![false, true, false]).unwrap();
        prop_assert_eq!(prob(&c, &fa.union(&fb).unwrap()).unwrap(), ratio(3, 7));
    }

    #[test]
    fn canonical_form_is_idempotent(s in real_set()) {
        let again = RealSet::from_intervals(s.intervals()).unwrap();
        prop_assert_eq!(&again, &s);
        let via_text = RealSet::parse(&s.to_string()).unwrap();
        prop_assert_eq!(&via_text, &s);
    }

    #[test]
    fn equal_extension_iff_equal_form(a in real_set(), b in real_set()) {
        let same = grid().all(|x| a.contains_rational(&x) == b.contains_rational(&x))
            && [ratio(-100, 1), ratio(100, 1)].iter().all(|x| a.contains_rational(x) == b.contains_rational(x));
        prop_assert_eq!(same, a == b);
        // De Morgan gives a second route to the same set
        let dm = a.complement().intersection(&b.complement()).complement();
        prop_assert_eq!(dm, a.union(&b));
    }

    #[test]
    fn sampler_has_prefix_property(n in 1usize..200, extra in 0usize..200, seed: u64) {
        let w = atomic_uniform();
        let short = sample(&w, n, seed).unwrap();
        let long = sample(&w, n + extra, seed).unwrap();
        prop_assert_eq!(short, long.prefix(n));
        let c = World::bernoulli(ratio(1, 3)).unwrap();
        prop_assert_eq!(sample(&c, n, seed).unwrap(), sample(&c, n + extra, seed).unwrap().prefix(n));
    }
}

#[test]
fn prob_examples() {
    let coin = SampleSpace::coin();
    let h = Event::parse(&coin, "{H}").unwrap();
    assert_eq!(prob(&World::bernoulli(ratio(3, 5)).unwrap(), &h).unwrap(), ratio(3, 5));
    assert_eq!(prob(&atomic_uniform(), &Event::whole(&SampleSpace::real_line())).unwrap(), ratio(1, 1));
    let u = World::uniform(ratio(0, 1), ratio(1, 1)).unwrap();
    let e = Event::parse(&SampleSpace::real_line(), "(1/4, 1/2)").unwrap();
    assert_eq!(prob(&u, &e).unwrap(), ratio(1, 4));
    assert_eq!(prob(&u, &h).unwrap_err().to_string(), "space mismatch");
}

#[test]
fn sample_examples() {
    let coin = SampleSpace::coin();
    let h = Event::parse(&coin, "{H}").unwrap();
    let s = sample(&World::bernoulli(ratio(1, 1)).unwrap(), 5, 99).unwrap();
    assert_eq!(s, SampleVector { master_seed: 99, ..SampleVector::from_symbols(&coin, &["H"; 5]).unwrap() });
    let fair = World::bernoulli(ratio(1, 2)).unwrap();
    assert_eq!(sample(&fair, 10_000, 5).unwrap(), sample(&fair, 10_000, 5).unwrap());
    // 0.01 is about 6.3 standard deviations at n = 10^5
    let freq = empirical_count(&sample(&fair, 100_000, 5).unwrap(), &h).unwrap() as f64 / 1e5;
    assert!((freq - 0.5).abs() < 0.01, "{freq}");
    assert!(sample(&fair, 0, 5).is_err());
}

#[test]
fn counting_examples() {
    let coin = SampleSpace::coin();
    let s = SampleVector::from_symbols(&coin, &["H", "H", "T", "H"]).unwrap();
    assert_eq!(empirical_count(&s, &Event::parse(&coin, "{H}").unwrap()).unwrap(), 3);
    assert_eq!(empirical_count(&s, &Event::empty(&coin)).unwrap(), 0);
    let r = SampleVector::from_reals(vec![0.1, 0.5, 0.9]).unwrap();
    let e = Event::parse(&SampleSpace::real_line(), "(1/4, 3/4)").unwrap();
    assert_eq!(empirical_count(&r, &e).unwrap(), 1);
    let closed = Event::parse(&SampleSpace::real_line(), "[1/2, 3/4]").unwrap();
    let open = Event::parse(&SampleSpace::real_line(), "(1/2, 3/4]").unwrap();
    assert_eq!(empirical_count(&r, &closed).unwrap(), 1);
    assert_eq!(empirical_count(&r, &open).unwrap(), 0);
}

#[test]
fn feasibility_examples() {
    let u = World::uniform(ratio(0, 1), ratio(1, 1)).unwrap();
    let e = Event::parse(&SampleSpace::real_line(), "(1/4, 1/2)").unwrap();
    assert!(is_feasible(&u, &e).unwrap());
    let atom = World::uniform_with_atoms(ratio(0, 1), ratio(1, 1), vec![Atom { at: ratio(1, 2), mass: ratio(3, 10) }])
        .unwrap();
    assert!(!is_feasible(&atom, &e).unwrap());
    let coin = SampleSpace::coin();
    for ev in Event::all_events(&coin).unwrap() {
        assert!(is_feasible(&World::bernoulli(ratio(1, 2)).unwrap(), &ev).unwrap());
    }
}
