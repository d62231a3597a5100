//! Classification of events, actions and processes.

use std::collections::BTreeSet;
use std::fmt;

use crate::model::event::{Event, EventKind, SemanticMap};
use crate::model::predicates::{coexisting, separable_actions};
use crate::model::{Action, Process};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum EventClass {
    Abstract,
    PureTemporal,
    PureSpatial,
    Embodied,
}

impl EventClass {
    pub fn as_str(self) -> &'static str {
        match self {
            EventClass::Abstract => "abstract",
            EventClass::PureTemporal => "pure-temporal",
            EventClass::PureSpatial => "pure-spatial",
            EventClass::Embodied => "embodied",
        }
    }
}

pub fn classify_event(e: &Event) -> EventClass {
    match (e.tag.time.is_some(), e.tag.space.is_some()) {
        (false, false) => EventClass::Abstract,
        (true, false) => EventClass::PureTemporal,
        (false, true) => EventClass::PureSpatial,
        (true, true) => EventClass::Embodied,
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ActionLabel {
    Finite,
    Signal,
    ExplicitCommunication,
    ImplicitCommunication,
    PureExplicitCommunication,
    WithoutRepetition,
    Coordinated,
    Sequential,
}

impl ActionLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ActionLabel::Finite => "finite",
            ActionLabel::Signal => "signal",
            ActionLabel::ExplicitCommunication => "explicit-communication",
            ActionLabel::ImplicitCommunication => "implicit-communication",
            ActionLabel::PureExplicitCommunication => "pure-explicit-communication",
            ActionLabel::WithoutRepetition => "without-repetition",
            ActionLabel::Coordinated => "coordinated",
            ActionLabel::Sequential => "sequential",
        }
    }
}

impl fmt::Display for ActionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ProcessLabel {
    Communication,
    PureCommunication,
    Finite,
    ActionSequential,
    StrictlySequential,
    Interleaving,
    WithoutRepetition,
    Coordinated,
    Sequential,
}

impl ProcessLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ProcessLabel::Communication => "communication",
            ProcessLabel::PureCommunication => "pure-communication",
            ProcessLabel::Finite => "finite",
            ProcessLabel::ActionSequential => "action-sequential",
            ProcessLabel::StrictlySequential => "strictly-sequential",
            ProcessLabel::Interleaving => "interleaving",
            ProcessLabel::WithoutRepetition => "without-repetition",
            ProcessLabel::Coordinated => "coordinated",
            ProcessLabel::Sequential => "sequential",
        }
    }
}

impl fmt::Display for ProcessLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn pairwise_distinct<T: PartialEq>(xs: &[T]) -> bool {
    xs.iter().enumerate().all(|(i, x)| xs[i + 1..].iter().all(|y| x != y))
}

fn without_repetition(events: &[&Event], sem: &SemanticMap) -> bool {
    let values: Vec<&str> = events.iter().map(|e| sem.value(&e.name)).collect();
    pairwise_distinct(&values)
}

fn coordinated(events: &[&Event]) -> bool {
    let tags: Vec<_> = events.iter().map(|e| &e.tag).collect();
    pairwise_distinct(&tags)
}

fn sequential(events: &[&Event]) -> bool {
    events.iter().all(|e| e.is_point_like()) && distinct_times(events)
}

fn distinct_times(events: &[&Event]) -> bool {
    let times: Vec<_> = events.iter().map(|e| e.time()).collect();
    pairwise_distinct(&times)
}

pub fn classify_action(a: &Action) -> BTreeSet<ActionLabel> {
    classify_action_in(a, &SemanticMap::identity())
}

/// Action labels, with event values taken through `sem`.
pub fn classify_action_in(a: &Action, sem: &SemanticMap) -> BTreeSet<ActionLabel> {
    let events = a.all_events();
    let mut out = BTreeSet::new();
    // Every representable action has finitely many events.
    out.insert(ActionLabel::Finite);
    if events.iter().all(|e| e.kind.is_communication()) {
        out.insert(ActionLabel::Signal);
    }
    let explicit = |k: EventKind| matches!(k, EventKind::Emission | EventKind::Reception);
    if events.iter().any(|e| explicit(e.kind)) {
        out.insert(ActionLabel::ExplicitCommunication);
        if events.iter().all(|e| explicit(e.kind)) {
            out.insert(ActionLabel::PureExplicitCommunication);
        }
    }
    if events.iter().any(|e| {
        matches!(e.kind, EventKind::Reading | EventKind::Writing)
            && e.carrier.as_ref().is_some_and(|c| a.shared_carriers().contains(c))
    }) {
        out.insert(ActionLabel::ImplicitCommunication);
    }
    if without_repetition(&events, sem) {
        out.insert(ActionLabel::WithoutRepetition);
    }
    if coordinated(&events) {
        out.insert(ActionLabel::Coordinated);
    }
    if sequential(&events) {
        out.insert(ActionLabel::Sequential);
    }
    out
}

pub fn classify_process(p: &Process) -> BTreeSet<ProcessLabel> {
    classify_process_in(p, &SemanticMap::identity())
}

/// Process labels. Event-level conditions quantify over the disjoint union of
/// the events of all actions.
pub fn classify_process_in(p: &Process, sem: &SemanticMap) -> BTreeSet<ProcessLabel> {
    let action_labels: Vec<BTreeSet<ActionLabel>> = p.elements().values().map(|a| classify_action_in(a, sem)).collect();
    let events = p.all_events();
    let actions: Vec<&Action> = p.elements().values().collect();
    let mut out = BTreeSet::new();
    out.insert(ProcessLabel::Finite);
    if action_labels
        .iter()
        .all(|l| l.contains(&ActionLabel::ExplicitCommunication) || l.contains(&ActionLabel::ImplicitCommunication))
    {
        out.insert(ProcessLabel::Communication);
    }
    if action_labels
        .iter()
        .all(|l| l.contains(&ActionLabel::PureExplicitCommunication))
    {
        out.insert(ProcessLabel::PureCommunication);
    }
    let nonempty: Vec<&Action> = actions.iter().copied().filter(|a| !a.is_empty()).collect();
    let each_pair = |f: &dyn Fn(&Action, &Action) -> bool| {
        nonempty
            .iter()
            .enumerate()
            .all(|(i, a)| nonempty[i + 1..].iter().all(|b| f(a, b)))
    };
    if each_pair(&|a, b| separable_actions(a, b).unwrap_or(false)) {
        out.insert(ProcessLabel::ActionSequential);
    }
    let all_sequential = action_labels.iter().all(|l| l.contains(&ActionLabel::Sequential));
    let events_apart = |a: &Action, b: &Action| {
        a.all_events()
            .iter()
            .all(|x| b.all_events().iter().all(|y| matches!(coexisting(x, y), Ok(false))))
    };
    if all_sequential && each_pair(&events_apart) {
        out.insert(ProcessLabel::StrictlySequential);
    }
    if distinct_times(&events) {
        out.insert(ProcessLabel::Interleaving);
    }
    if without_repetition(&events, sem) {
        out.insert(ProcessLabel::WithoutRepetition);
    }
    if coordinated(&events) {
        out.insert(ProcessLabel::Coordinated);
    }
    if sequential(&events) {
        out.insert(ProcessLabel::Sequential);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{action_of, process_of, EventKind as K};
    use crate::rational::Rational;

    #[test]
    fn event_classes() {
        assert_eq!(classify_event(&Event::named("a")), EventClass::Abstract);
        assert_eq!(classify_event(&Event::point("a", 1)), EventClass::PureTemporal);
        assert_eq!(
            classify_event(&Event::named("a").with_space("n3")),
            EventClass::PureSpatial
        );
        assert_eq!(
            classify_event(&Event::point("a", 1).with_space("n3")),
            EventClass::Embodied
        );
    }

    #[test]
    fn single_emission_has_every_applicable_label() {
        let a = action_of([Event::point("a", 1).with_kind(K::Emission)]);
        let expected: BTreeSet<_> = [
            ActionLabel::Finite,
            ActionLabel::Signal,
            ActionLabel::ExplicitCommunication,
            ActionLabel::PureExplicitCommunication,
            ActionLabel::WithoutRepetition,
            ActionLabel::Coordinated,
            ActionLabel::Sequential,
        ]
        .into();
        assert_eq!(classify_action(&a), expected);
    }

    #[test]
    fn simultaneous_distinct_events_are_not_sequential() {
        let a = action_of([Event::point("a", 1), Event::point("b", 1)]);
        let l = classify_action(&a);
        // Same tag, distinct events.
        assert!(!l.contains(&ActionLabel::Coordinated));
        assert!(l.contains(&ActionLabel::WithoutRepetition));
        assert!(!l.contains(&ActionLabel::Sequential));
        assert!(!l.contains(&ActionLabel::Signal));
        let apart = action_of([Event::point("a", 1), Event::point("b", 1).with_space("n1")]);
        assert!(classify_action(&apart).contains(&ActionLabel::Coordinated));
    }

    #[test]
    fn implicit_communication_needs_a_shared_carrier() {
        let ev = Event::point("w", 1).with_kind(K::Writing).with_carrier("mem");
        let private = action_of([ev.clone()]);
        assert!(!classify_action(&private).contains(&ActionLabel::ImplicitCommunication));
        let shared = action_of([ev]).with_shared_carriers(["mem".to_string()]);
        let l = classify_action(&shared);
        assert!(l.contains(&ActionLabel::ImplicitCommunication));
        assert!(l.contains(&ActionLabel::Signal));
        assert!(!l.contains(&ActionLabel::ExplicitCommunication));
    }

    #[test]
    fn repetition_uses_semantic_values() {
        let a = action_of([Event::point("a", 1), Event::point("b", 2)]);
        let mut sem = SemanticMap::identity();
        assert!(classify_action_in(&a, &sem).contains(&ActionLabel::WithoutRepetition));
        sem.entries.insert("a".into(), "v".into());
        sem.entries.insert("b".into(), "v".into());
        assert!(!classify_action_in(&a, &sem).contains(&ActionLabel::WithoutRepetition));
    }

    #[test]
    fn abstract_events_are_not_coordinated() {
        let a = action_of([Event::named("a"), Event::named("b")]);
        let l = classify_action(&a);
        assert!(!l.contains(&ActionLabel::Coordinated));
        assert!(!l.contains(&ActionLabel::Sequential));
    }

    #[test]
    fn separated_sequential_actions() {
        let p = process_of([
            action_of([Event::point("a", 0), Event::point("b", 1)]),
            action_of([Event::point("c", 2), Event::point("d", 3)]),
        ]);
        let l = classify_process(&p);
        for label in [
            ProcessLabel::ActionSequential,
            ProcessLabel::StrictlySequential,
            ProcessLabel::Interleaving,
            ProcessLabel::Finite,
        ] {
            assert!(l.contains(&label), "{label}");
        }
    }

    #[test]
    fn shared_time_across_actions_breaks_interleaving() {
        let p = process_of([action_of([Event::point("a", 1)]), action_of([Event::point("b", 1)])]);
        assert!(!classify_process(&p).contains(&ProcessLabel::Interleaving));
    }

    #[test]
    fn overlapping_point_actions_are_interleaving_and_strictly_sequential() {
        let p = process_of([
            action_of([Event::point("a", 1), Event::point("c", 3)]),
            action_of([Event::point("b", 2)]),
        ]);
        let l = classify_process(&p);
        assert!(l.contains(&ProcessLabel::Interleaving));
        assert!(l.contains(&ProcessLabel::StrictlySequential));
        assert!(!l.contains(&ProcessLabel::ActionSequential));
    }

    #[test]
    fn extended_overlap_is_not_strictly_sequential() {
        let iv = |n: &str, b: i64, e: i64| Event::extended(n, Rational::integer(b), Rational::integer(e)).unwrap();
        let p = process_of([action_of([iv("a", 0, 2)]), action_of([iv("b", 1, 3)])]);
        let l = classify_process(&p);
        assert!(l.contains(&ProcessLabel::Interleaving));
        assert!(!l.contains(&ProcessLabel::StrictlySequential));
    }

    #[test]
    fn communication_processes() {
        let em = |n: &str, t: i64| Event::point(n, t).with_kind(K::Emission);
        let p = process_of([action_of([em("a", 1)]), action_of([em("b", 2)])]);
        let l = classify_process(&p);
        assert!(l.contains(&ProcessLabel::Communication));
        assert!(l.contains(&ProcessLabel::PureCommunication));
        let q = process_of([action_of([em("a", 1), Event::point("g", 2)])]);
        let l = classify_process(&q);
        assert!(l.contains(&ProcessLabel::Communication));
        assert!(!l.contains(&ProcessLabel::PureCommunication));
    }
}
