use proptest::prelude::*;
use weakverify::propositional::{
    constantly_zero, eventually_zero, limiting_verifier_prop, open_verifier, simulate_inquiry, solver_prop,
    zero_or_not, Conclusion, OpenSet, SequenceWorld,
};

const HORIZON: usize = 64;

fn bits(max: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..=1, 0..max)
}

fn world() -> impl Strategy<Value = SequenceWorld> {
    (bits(10), prop::collection::vec(0u8..=1, 1..5)).prop_map(|(p, c)| SequenceWorld::new(p, c).unwrap())
}

fn sets() -> Vec<OpenSet> {
    vec![
        OpenSet::SomeSymbol(0),
        OpenSet::SomeSymbol(1),
        OpenSet::SymbolAt { pos: 3, bit: 1 },
        OpenSet::SymbolAtOrAfter { pos: 5, bit: 0 },
        OpenSet::Everything,
        OpenSet::Nothing,
    ]
}

/// The tail of outputs once the world's structure has been fully seen.
fn settles_to(out: &[Conclusion], from: usize) -> Option<Conclusion> {
    let last = *out.last().unwrap();
    out[from..].iter().all(|c| *c == last).then_some(last)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn oracles_are_monotone(s in bits(20), b in 0u8..=1) {
        for o in sets() {
            if o.entails(&s) {
                let mut t = s.clone();
                t.push(b);
                prop_assert!(o.entails(&t));
            }
        }
    }

    #[test]
    fn open_verifier_is_infallible(s in bits(12), tail in world()) {
        let ext = tail.preceded_by(&s).unwrap();
        for o in sets() {
            if open_verifier(o.clone()).conclude(&s) == Conclusion::H {
                prop_assert!(o.contains(&ext));
            }
        }
    }

    #[test]
    fn open_verifier_converges_exactly_on_members(w in world()) {
        let o = OpenSet::SomeSymbol(0);
        let out = simulate_inquiry(&w, &open_verifier(o.clone()), HORIZON).unwrap();
        let settled = settles_to(&out, w.prefix_len() + w.period());
        prop_assert_eq!(settled == Some(Conclusion::H), o.contains(&w));
    }

    #[test]
    fn constantly_zero_is_abandoned_off_hypothesis(w in world()) {
        let m = limiting_verifier_prop(constantly_zero());
        let out = simulate_inquiry(&w, &m, HORIZON).unwrap();
        let all_zero = !OpenSet::SomeSymbol(1).contains(&w);
        if all_zero {
            prop_assert!(out.iter().all(|c| *c == Conclusion::Piece(1)));
        } else {
            // once a one is seen, the conjecture is gone for good
            let first_one = (0..).find(|&i| w.bit(i) == 1).unwrap();
            prop_assert!(out[first_one + 1..].iter().all(|c| *c == Conclusion::W));
        }
    }

    #[test]
    fn eventually_zero_finds_last_one(w in world()) {
        let p = eventually_zero();
        let out = simulate_inquiry(&w, &limiting_verifier_prop(p.clone()), HORIZON).unwrap();
        let settled = settles_to(&out, w.prefix_len() + w.period() + 1);
        match p.piece_of(&w, HORIZON) {
            Some(k) => prop_assert_eq!(settled, Some(Conclusion::Piece(k))),
            None => {
                // retraction: every conjectured piece is later abandoned
                for (n, c) in out.iter().enumerate().take(HORIZON / 2) {
                    if let Conclusion::Piece(i) = c {
                        prop_assert!(out[n + 1..].iter().any(|d| d != &Conclusion::Piece(*i)));
                    }
                }
            }
        }
    }

    #[test]
    fn solver_finds_zero_or_not(w in world()) {
        let out = simulate_inquiry(&w, &solver_prop(zero_or_not()), HORIZON).unwrap();
        let truth = if OpenSet::SomeSymbol(0).contains(&w) { 1 } else { 2 };
        prop_assert_eq!(settles_to(&out, w.prefix_len() + w.period()), Some(Conclusion::Answer(truth)));
    }
}

#[test]
fn stabilizes_on_worked_examples() {
    let w = SequenceWorld::parse("110000…").unwrap();
    let out = simulate_inquiry(&w, &limiting_verifier_prop(eventually_zero()), 20).unwrap();
    assert_eq!(*out.last().unwrap(), Conclusion::Piece(2));
    let zeros = SequenceWorld::constant(0).unwrap();
    let out = simulate_inquiry(&zeros, &limiting_verifier_prop(constantly_zero()), 20).unwrap();
    assert!(out.iter().all(|c| *c == Conclusion::Piece(1)));
}
