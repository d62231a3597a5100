use std::collections::BTreeSet;

use eap::acp::{traces, translate};
use eap::action_algebra::{free_parallel, free_seq, mpar_pairs, mpar_seq, strong_seq_actions, Pairing};
use eap::dsl::{parse_document, parse_expr, serialize_document};
use eap::model::{
    action_of, classify_action, extent, process_of, realizations, ActionLabel, Document, Event, Object, Status,
};
use eap::oracles::{oracle_measures, oracle_realization_traces};
use eap::process_algebra::observable_trace;
use eap::{Error, Rational};
use proptest::prelude::*;

fn r(n: i64) -> Rational {
    Rational::from(n)
}

fn pts(points: &[(&str, i64)]) -> eap::model::Action {
    action_of(points.iter().map(|&(n, t)| Event::point(n, r(t))))
}

#[test]
fn measures_of_a_small_action() {
    let a = pts(&[("a", 1), ("b", 1), ("c", 2)]);
    assert_eq!(mpar_pairs(&a).unwrap(), 1);
    assert_eq!(mpar_seq(&a).unwrap(), 1);
    let o = oracle_measures(&a, &a).unwrap();
    assert_eq!((o.pairs, o.seq), (1, 1));
}

#[test]
fn sequencing_then_parallel_composition() {
    let a = pts(&[("a", 0), ("b", 1)]);
    let b = pts(&[("c", 0), ("d", 2)]);
    let s = free_seq(&a, &b, r(1)).unwrap();
    assert_eq!(extent(&s).unwrap(), (r(0), r(4)));
    assert!(classify_action(&s).contains(&ActionLabel::Sequential));
    let p = free_parallel(&a, &b).unwrap();
    assert!(mpar_pairs(&p).unwrap() > 0);
}

#[test]
fn strong_sequencing_needs_matching_states() {
    let mut e = Event::point("w", r(0));
    e.out_state = Some("s".into());
    let mut f = Event::point("v", r(0));
    f.in_state = Some("t".into());
    let pairing = Pairing::new(vec![("e0".into(), "e0".into())]).unwrap();
    let err = strong_seq_actions(&action_of([e]), &action_of([f]), &pairing).unwrap_err();
    assert!(matches!(err, Error::Link(_)), "{err}");
}

#[test]
fn translated_expressions_realize_their_traces() {
    for text in ["(a+b).c", "a || b.c", "tau{b}(a.b.c)", "(a.b) |L c"] {
        let x = parse_expr(text).unwrap();
        let p = translate(&x).unwrap();
        assert_eq!(*p.status(), Status::Potential);
        let mut seen = BTreeSet::new();
        for q in realizations(&p).unwrap() {
            seen.insert(observable_trace(&q).unwrap());
        }
        assert_eq!(seen, traces(&x).unwrap(), "{text}");
        assert_eq!(seen, oracle_realization_traces(&p).unwrap(), "{text}");
    }
}

#[test]
fn documents_round_trip_through_text() {
    let mut doc = Document::default();
    doc.actions.insert("A".into(), pts(&[("a", 1), ("b", 2)]));
    doc.processes
        .insert("P".into(), process_of([pts(&[("a", 1)]), pts(&[("b", 3)])]));
    let back = parse_document(&serialize_document(&doc)).unwrap();
    assert_eq!(back, doc);
    assert!(matches!(back.lookup("P").unwrap(), Object::Process(_)));
    assert!(matches!(back.lookup("Z"), Err(Error::Resolution(_))));
}

proptest! {
    #[test]
    fn single_time_actions_have_maximal_pair_count(n in 1usize..8, t in -5i64..5) {
        let a = action_of((0..n).map(|i| Event::point(format!("e{i}"), r(t))));
        prop_assert_eq!(mpar_pairs(&a).unwrap(), (n * (n - 1) / 2) as u64);
        prop_assert_eq!(mpar_seq(&a).unwrap(), (n - 1) as u64);
    }
}
