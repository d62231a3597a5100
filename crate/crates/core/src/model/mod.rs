//! Events, actions and processes, their predicates and classifications, and
//! the two lifts (events into actions, actions into processes).

pub mod classify;
pub mod document;
pub mod event;
pub mod predicates;
pub mod realize;
pub mod sub;
pub mod system;

pub use classify::{
    classify_action, classify_action_in, classify_event, classify_process, classify_process_in, ActionLabel,
    EventClass, ProcessLabel,
};
pub use document::{Document, Object};
pub use event::{Category, Event, EventKey, EventKind, SemanticMap, SpaceGraph, Tag, TemporalCoord, TAU};
pub use predicates::*;
pub use realize::{realization_sets, realizations, realizations_with, RealizationConfig};
pub use sub::{complete_subaction, enhanced_subprocess, is_subsystem_of, subaction, subprocess};
pub use system::{all_point_times, CompatConstraint, CompatMode, Element, Relations, Status, System};

use std::collections::BTreeSet;

use crate::error::Result;

/// A system of related events.
pub type Action = System<Event>;

/// A system of related actions.
pub type Process = System<Action>;

impl Element for Action {
    type Key = Action;

    fn identity(&self) -> Action {
        self.clone()
    }

    fn for_each_event<'a>(&'a self, f: &mut dyn FnMut(&'a Event)) {
        for e in self.elements.values() {
            f(e)
        }
    }

    fn map_events(&self, f: &mut dyn FnMut(&Event) -> Result<Event>) -> Result<Self> {
        self.map_elements(|_, e| f(e))
    }
}

/// First lift: events into an action.
pub fn form_action(
    events: Vec<(String, Event)>,
    relations: Relations,
    constraints: BTreeSet<CompatConstraint>,
    status: Status,
) -> Result<Action> {
    for (_, e) in &events {
        if let Some(t) = e.time() {
            t.validate()?;
        }
    }
    Action::form(events, relations, constraints, status)
}

/// Second lift: actions into a process.
pub fn form_process(
    actions: Vec<(String, Action)>,
    relations: Relations,
    constraints: BTreeSet<CompatConstraint>,
    status: Status,
) -> Result<Process> {
    Process::form(actions, relations, constraints, status)
}

/// An actualized, relation-free action holding `events` under ids `e0, e1, ...`.
pub fn action_of(events: impl IntoIterator<Item = Event>) -> Action {
    let list = events
        .into_iter()
        .enumerate()
        .map(|(i, e)| (format!("e{i}"), e))
        .collect();
    Action::form(list, Relations::new(), BTreeSet::new(), Status::Actualized)
        .expect("relation-free actualized actions always form")
}

/// An actualized, relation-free process holding `actions` under ids `a0, a1, ...`.
pub fn process_of(actions: impl IntoIterator<Item = Action>) -> Process {
    let list = actions
        .into_iter()
        .enumerate()
        .map(|(i, a)| (format!("a{i}"), a))
        .collect();
    Process::form(list, Relations::new(), BTreeSet::new(), Status::Actualized)
        .expect("relation-free actualized processes always form")
}
