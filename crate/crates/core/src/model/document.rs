use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::event::{SemanticMap, SpaceGraph};
use crate::model::{Action, Process};

/// A named collection of actions and processes over one space graph and one
/// semantic map.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub space_graph: SpaceGraph,
    pub semantics: SemanticMap,
    pub actions: BTreeMap<String, Action>,
    pub processes: BTreeMap<String, Process>,
}

/// An object a document can name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Object {
    Action(Action),
    Process(Process),
}

impl Document {
    pub fn lookup(&self, name: &str) -> Result<Object> {
        if let Some(a) = self.actions.get(name) {
            return Ok(Object::Action(a.clone()));
        }
        if let Some(p) = self.processes.get(name) {
            return Ok(Object::Process(p.clone()));
        }
        Err(Error::Resolution(format!("document has no action or process {name:?}")))
    }

    /// Every space coordinate must name a node of the space graph.
    pub fn validate(&self) -> Result<()> {
        for (a, b) in &self.space_graph.edges {
            for n in [a, b] {
                if !self.space_graph.nodes.contains(n) {
                    return Err(Error::schema(
                        "space_graph.edges",
                        format!("endpoint {n:?} is not a declared node"),
                    ));
                }
            }
        }
        let check = |path: String, action: &Action| -> Result<()> {
            action
                .validate()
                .map_err(|e| Error::schema(path.clone(), e.to_string()))?;
            for (id, e) in action.elements() {
                if let Some(node) = e.tag.space() {
                    if !self.space_graph.nodes.contains(node) {
                        return Err(Error::schema(
                            format!("{path}.events.{id}.space"),
                            format!("unknown space node {node:?}"),
                        ));
                    }
                }
            }
            Ok(())
        };
        for (name, a) in &self.actions {
            check(format!("actions.{name}"), a)?;
        }
        for (name, p) in &self.processes {
            p.validate()
                .map_err(|e| Error::schema(format!("processes.{name}"), e.to_string()))?;
            for (id, a) in p.elements() {
                check(format!("processes.{name}.actions.{id}"), a)?;
            }
        }
        Ok(())
    }
}
