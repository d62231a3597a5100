//! The process level: compositions of processes and observable traces.

use std::collections::BTreeSet;

use crate::action_algebra::{
    free_interleave, free_parallel, free_seq, link_strong, project_tags, project_values_in, rename_action_in,
    seq_delta, shift_action, translate, ActionShift, Pairing,
};
use crate::error::{Error, Result};
use crate::event_algebra::{RenamingMap, TagShift};
use crate::model::{Action, Process, SemanticMap, Status, Tag, TAU};
use crate::rational::Rational;

pub fn free_compose_p(p1: &Process, p2: &Process) -> Process {
    p1.union(p2)
}

pub fn meet_p(p1: &Process, p2: &Process) -> Process {
    p1.meet(p2)
}

pub fn complement_p(p: &Process, universe: &Process) -> Result<Process> {
    p.complement_in(universe)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TemporalKind {
    Seq,
    Interleave,
    Parallel,
}

/// Temporal composition with the shift computed over all events of both processes.
pub fn temporal_compose_p(p1: &Process, p2: &Process, kind: TemporalKind, gap: Rational) -> Result<Process> {
    match kind {
        TemporalKind::Seq => free_seq(p1, p2, gap),
        TemporalKind::Interleave => free_interleave(p1, p2),
        TemporalKind::Parallel => free_parallel(p1, p2),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Projection {
    Values(BTreeSet<String>),
    Tags(BTreeSet<Tag>),
}

/// Projects every action; actions left empty are dropped.
pub fn project_p(p: &Process, proj: &Projection) -> Process {
    project_p_in(p, proj, &SemanticMap::identity())
}

pub fn project_p_in(p: &Process, proj: &Projection, sem: &SemanticMap) -> Process {
    let kept: BTreeSet<String> = p
        .elements()
        .iter()
        .filter(|(_, a)| !project_one(a, proj, sem).is_empty())
        .map(|(id, _)| id.clone())
        .collect();
    let sub = p.restrict_unchecked(&kept, &p.relation_labels());
    sub.map_elements(|_, a| Ok(project_one(a, proj, sem)))
        .expect("projection never fails")
}

fn project_one(a: &Action, proj: &Projection, sem: &SemanticMap) -> Action {
    match proj {
        Projection::Values(w) => project_values_in(a, w, sem),
        Projection::Tags(k) => project_tags(a, k),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Transform {
    /// The same tag mapping for every event of the process.
    Shift(TagShift),
    Rename(RenamingMap),
}

pub fn transform_p(p: &Process, t: &Transform) -> Result<Process> {
    transform_p_in(p, t, &SemanticMap::identity())
}

pub fn transform_p_in(p: &Process, t: &Transform, sem: &SemanticMap) -> Result<Process> {
    match t {
        Transform::Shift(sft) => {
            let shift = ActionShift::Uniform(sft.clone());
            p.map_elements(|_, a| shift_action(a, &shift))
        }
        Transform::Rename(rn) => p.map_elements(|_, a| rename_action_in(a, rn, sem)),
    }
}

/// Pairs actions of a first process with actions of a second, each with an
/// event pairing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProcessPairing {
    pairs: Vec<(String, String, Pairing)>,
}

impl ProcessPairing {
    pub fn new(pairs: Vec<(String, String, Pairing)>) -> Result<Self> {
        let (mut left, mut right) = (BTreeSet::new(), BTreeSet::new());
        for (a, b, _) in &pairs {
            if !left.insert(a) || !right.insert(b) {
                return Err(Error::InvalidParameter(format!(
                    "pairing repeats an action id in ({a}, {b})"
                )));
            }
        }
        Ok(ProcessPairing { pairs })
    }

    pub fn empty() -> Self {
        ProcessPairing::default()
    }

    pub fn pairs(&self) -> &[(String, String, Pairing)] {
        &self.pairs
    }
}

fn linked_actions(p1: &Process, p2: &Process, pairing: &ProcessPairing) -> Result<Vec<(String, Action)>> {
    let get = |p: &Process, id: &str| {
        p.get(id)
            .cloned()
            .ok_or_else(|| Error::Resolution(format!("pairing names unknown action {id:?}")))
    };
    pairing
        .pairs
        .iter()
        .map(|(x, y, ep)| Ok((format!("{x};{y}"), link_strong(&get(p1, x)?, &get(p2, y)?, ep)?)))
        .collect()
}

fn link_status(p1: &Process, p2: &Process) -> Status {
    if *p1.status() == Status::Actualized && *p2.status() == Status::Actualized {
        Status::Actualized
    } else {
        Status::Potential
    }
}

/// `P1 ∘ P2`: `P2` moved after `P1`, then every action paired and strongly linked.
pub fn strong_seq_p(p1: &Process, p2: &Process, pairing: &ProcessPairing) -> Result<Process> {
    let shifted = translate(p2, seq_delta(p1, p2, Rational::ONE)?)?;
    let linked = linked_actions(p1, &shifted, pairing)?;
    let left: BTreeSet<&String> = pairing.pairs.iter().map(|(x, _, _)| x).collect();
    let right: BTreeSet<&String> = pairing.pairs.iter().map(|(_, y, _)| y).collect();
    if !p1.ids().all(|id| left.contains(id)) || !shifted.ids().all(|id| right.contains(id)) {
        return Err(Error::Coverage(
            "strong composition must pair every action of both operands".into(),
        ));
    }
    Process::form(linked, Default::default(), BTreeSet::new(), link_status(p1, p2))
}

/// `P1 ◊ P2`: paired actions are strongly linked, the others kept as in `P1 · P2`.
pub fn mixed_seq_p(p1: &Process, p2: &Process, pairing: &ProcessPairing) -> Result<Process> {
    let shifted = translate(p2, seq_delta(p1, p2, Rational::ONE)?)?;
    let linked = Process::form(
        linked_actions(p1, &shifted, pairing)?,
        Default::default(),
        BTreeSet::new(),
        link_status(p1, p2),
    )?;
    let rest = |p: &Process, used: BTreeSet<&String>| {
        let keep: BTreeSet<String> = p.ids().filter(|id| !used.contains(id)).cloned().collect();
        p.restrict_unchecked(&keep, &p.relation_labels())
    };
    let left = rest(p1, pairing.pairs.iter().map(|(x, _, _)| x).collect());
    let right = rest(&shifted, pairing.pairs.iter().map(|(_, y, _)| y).collect());
    Ok(left.union(&right).union(&linked))
}

/// Names of the observable events of an actualized process in time order,
/// with silent steps removed.
pub fn observable_trace(p: &Process) -> Result<Vec<String>> {
    if *p.status() != Status::Actualized {
        return Err(Error::Precondition(
            "observable traces are defined for actualized processes".into(),
        ));
    }
    let mut seen: Vec<(Rational, &str)> = Vec::new();
    for e in p.all_events() {
        if e.observable {
            seen.push((e.point_time()?, &e.name));
        }
    }
    seen.sort();
    for w in seen.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::AmbiguousTrace(w[0].0.to_string()));
        }
    }
    Ok(seen
        .into_iter()
        .filter(|(_, n)| *n != TAU)
        .map(|(_, n)| n.to_string())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{action_of, classify_process, process_of, Event, ProcessLabel};

    fn act(points: &[(&str, i64)]) -> Action {
        action_of(points.iter().map(|&(n, t)| Event::point(n, t)))
    }

    #[test]
    fn lattice_basics() {
        let p = process_of([act(&[("a", 1)]), act(&[("b", 2)])]);
        let q = process_of([act(&[("b", 2)]), act(&[("c", 3)])]);
        assert_eq!(free_compose_p(&p, &p), p);
        assert_eq!(free_compose_p(&p, &Process::empty(Status::Actualized)), p);
        assert_eq!(meet_p(&p, &free_compose_p(&p, &q)), p);
        assert_eq!(meet_p(&p, &q), process_of([act(&[("b", 2)])]));
        let u = free_compose_p(&p, &q);
        assert_eq!(complement_p(&p, &u).unwrap(), process_of([act(&[("c", 3)])]));
    }

    #[test]
    fn sequential_composition_shifts_all_events() {
        let p1 = process_of([act(&[("a", 1), ("b", 2)])]);
        let p2 = process_of([act(&[("c", 1)]), act(&[("d", 2)])]);
        let out = temporal_compose_p(&p1, &p2, TemporalKind::Seq, Rational::ONE).unwrap();
        let times: BTreeSet<_> = out.all_events().iter().map(|e| e.to_string()).collect();
        assert_eq!(times, ["a@1", "b@2", "c@3", "d@4"].map(String::from).into());
        assert!(classify_process(&out).contains(&ProcessLabel::Interleaving));
    }

    #[test]
    fn single_action_processes_agree_with_actions() {
        let (a, b) = (act(&[("a", 1), ("b", 3)]), act(&[("c", 0)]));
        let out = temporal_compose_p(
            &process_of([a.clone()]),
            &process_of([b.clone()]),
            TemporalKind::Seq,
            Rational::ONE,
        )
        .unwrap();
        let direct = free_seq(&a, &b, Rational::ONE).unwrap();
        let from_p: BTreeSet<_> = out.all_events().into_iter().cloned().collect();
        let from_a: BTreeSet<_> = direct.all_events().into_iter().cloned().collect();
        assert_eq!(from_p, from_a);
    }

    #[test]
    fn projection_drops_empty_actions() {
        let p = process_of([act(&[("a", 1)]), act(&[("b", 2), ("c", 3)])]);
        let all = Projection::Values(["a", "b", "c"].map(String::from).into());
        assert_eq!(project_p(&p, &all), p);
        let out = project_p(&p, &Projection::Values(["c".to_string()].into()));
        assert_eq!(out, process_of([act(&[("c", 3)])]));
        assert_eq!(
            transform_p(&p, &Transform::Shift(TagShift::Translate(Rational::ZERO))).unwrap(),
            p
        );
    }

    #[test]
    fn strong_and_mixed_processes() {
        let p1 = process_of([action_of([Event::point("a", 1).with_states("s0", "s1")])]);
        let p2 = process_of([action_of([Event::point("b", 1).with_states("s1", "s2")])]);
        let ep = Pairing::new(vec![("e0".into(), "e0".into())]).unwrap();
        let pp = ProcessPairing::new(vec![("a0".into(), "a0".into(), ep)]).unwrap();
        let out = strong_seq_p(&p1, &p2, &pp).unwrap();
        assert_eq!(
            out,
            process_of([action_of([Event::point("a;b", 2).with_states("s0", "s2")])])
        );
        assert_eq!(
            mixed_seq_p(&p1, &p2, &ProcessPairing::empty()).unwrap(),
            temporal_compose_p(&p1, &p2, TemporalKind::Seq, Rational::ONE).unwrap()
        );
        let bad = process_of([action_of([Event::point("b", 1).with_states("x", "s2")])]);
        assert!(matches!(strong_seq_p(&p1, &bad, &pp), Err(Error::Link(_))));
        assert!(matches!(
            strong_seq_p(&p1, &p2, &ProcessPairing::empty()),
            Err(Error::Coverage(_))
        ));
    }

    #[test]
    fn traces() {
        let p = process_of([action_of([
            Event::point("a", 1),
            Event::point("h", 2).hidden(),
            Event::point("b", 3),
        ])]);
        assert_eq!(observable_trace(&p).unwrap(), ["a", "b"]);
        let hidden = process_of([action_of([Event::point("h", 2).hidden()])]);
        assert!(observable_trace(&hidden).unwrap().is_empty());
        let clash = process_of([act(&[("a", 1)]), act(&[("b", 1)])]);
        assert!(matches!(observable_trace(&clash), Err(Error::AmbiguousTrace(_))));
        let mut pot = p.clone();
        pot.set_status(Status::Potential);
        assert!(observable_trace(&pot).is_err());
    }
}
