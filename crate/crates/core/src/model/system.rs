//! Systems of related elements.
//!
//! An action is a system of events and a process is a system of actions; both
//! share the representation [`System`]: elements under local ids, labelled
//! binary relations over those ids, compatibility constraints and a
//! realization status. Element identity follows [`Element::identity`], so a
//! system never holds two local ids for the same element.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::model::event::Event;
use crate::rational::Rational;

/// Something a [`System`] can be built from.
pub trait Element: Clone + Ord + Debug {
    type Key: Ord + Clone + Debug;

    fn identity(&self) -> Self::Key;

    /// Visits every event carried by the element.
    fn for_each_event<'a>(&'a self, f: &mut dyn FnMut(&'a Event));

    /// Rebuilds the element with every event replaced by `f(event)`.
    fn map_events(&self, f: &mut dyn FnMut(&Event) -> Result<Event>) -> Result<Self>;

    fn events(&self) -> Vec<&Event> {
        let mut out = Vec::new();
        self.for_each_event(&mut |e| out.push(e));
        out
    }
}

impl Element for Event {
    type Key = crate::model::event::EventKey;

    fn identity(&self) -> Self::Key {
        self.key()
    }

    fn for_each_event<'a>(&'a self, f: &mut dyn FnMut(&'a Event)) {
        f(self)
    }

    fn map_events(&self, f: &mut dyn FnMut(&Event) -> Result<Event>) -> Result<Self> {
        f(self)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CompatMode {
    Compatible,
    WeaklyCompatible,
    StronglyCompatible,
    Incompatible,
    StronglyIncompatible,
    WeaklyIncompatible,
}

impl CompatMode {
    pub const ALL: [CompatMode; 6] = [
        CompatMode::Compatible,
        CompatMode::WeaklyCompatible,
        CompatMode::StronglyCompatible,
        CompatMode::Incompatible,
        CompatMode::StronglyIncompatible,
        CompatMode::WeaklyIncompatible,
    ];

    /// `from` present forces `to` present.
    pub fn is_implication(self) -> bool {
        matches!(self, CompatMode::Compatible | CompatMode::StronglyCompatible)
    }

    /// `from` and `to` never appear together.
    pub fn is_exclusion(self) -> bool {
        matches!(self, CompatMode::Incompatible | CompatMode::StronglyIncompatible)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CompatMode::Compatible => "compatible",
            CompatMode::WeaklyCompatible => "weakly-compatible",
            CompatMode::StronglyCompatible => "strongly-compatible",
            CompatMode::Incompatible => "incompatible",
            CompatMode::StronglyIncompatible => "strongly-incompatible",
            CompatMode::WeaklyIncompatible => "weakly-incompatible",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        CompatMode::ALL.into_iter().find(|m| m.as_str() == s)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CompatConstraint {
    pub from: String,
    pub to: String,
    pub mode: CompatMode,
}

impl CompatConstraint {
    pub fn new(from: impl Into<String>, to: impl Into<String>, mode: CompatMode) -> Self {
        CompatConstraint {
            from: from.into(),
            to: to.into(),
            mode,
        }
    }
}

/// Realization status. `Emerging` names the ids of the actualized part.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub enum Status {
    #[default]
    Actualized,
    Potential,
    Emerging(BTreeSet<String>),
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Actualized => "actualized",
            Status::Potential => "potential",
            Status::Emerging(_) => "emerging",
        }
    }

    fn flags(&self, id: &str) -> bool {
        match self {
            Status::Actualized => true,
            Status::Potential => false,
            Status::Emerging(ids) => ids.contains(id),
        }
    }
}

/// Labelled binary relations over local ids.
pub type Relations = BTreeMap<String, BTreeSet<(String, String)>>;

#[derive(Clone, Debug, Default)]
pub struct System<T> {
    pub(crate) elements: BTreeMap<String, T>,
    pub(crate) relations: Relations,
    pub(crate) constraints: BTreeSet<CompatConstraint>,
    pub(crate) status: Status,
    /// Information carriers shared with other actions. Only meaningful for actions.
    pub(crate) shared_carriers: BTreeSet<String>,
}

/// Id-independent content of a system, used for structural equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Canonical<T> {
    pub elements: BTreeSet<T>,
    pub relations: BTreeMap<String, BTreeSet<(T, T)>>,
    pub constraints: BTreeSet<(T, T, CompatMode)>,
    pub status: CanonicalStatus<T>,
    pub shared_carriers: BTreeSet<String>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum CanonicalStatus<T> {
    Actualized,
    Potential,
    Emerging(BTreeSet<T>),
}

impl<T: Element> PartialEq for System<T> {
    fn eq(&self, other: &Self) -> bool {
        // Elements are pairwise distinct, so differing counts rule out equality.
        if self.elements.len() != other.elements.len() || self.constraints.len() != other.constraints.len() {
            return false;
        }
        let same_layout = self.elements == other.elements
            && self.relations == other.relations
            && self.constraints == other.constraints
            && self.status == other.status
            && self.shared_carriers == other.shared_carriers;
        same_layout || self.canonical() == other.canonical()
    }
}

impl<T: Element> Eq for System<T> {}

impl<T: Element> PartialOrd for System<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Element> Ord for System<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical().cmp(&other.canonical())
    }
}

fn fresh_id<V>(wanted: &str, taken: &BTreeMap<String, V>) -> String {
    if !taken.contains_key(wanted) {
        return wanted.to_string();
    }
    (2..)
        .map(|n| format!("{wanted}_{n}"))
        .find(|c| !taken.contains_key(c))
        .expect("unbounded id supply")
}

impl<T: Element> System<T> {
    pub fn empty(status: Status) -> Self {
        System {
            elements: BTreeMap::new(),
            relations: Relations::new(),
            constraints: BTreeSet::new(),
            status,
            shared_carriers: BTreeSet::new(),
        }
    }

    /// Lifts a list of elements into a system.
    ///
    /// Structurally identical elements collapse onto the first id that holds
    /// them, and relation and constraint endpoints follow. Dangling ids in
    /// relations, constraints or the status are resolution errors.
    pub fn form(
        elements: Vec<(String, T)>,
        relations: Relations,
        constraints: BTreeSet<CompatConstraint>,
        status: Status,
    ) -> Result<Self> {
        let mut kept: BTreeMap<String, T> = BTreeMap::new();
        let mut by_key: BTreeMap<T::Key, String> = BTreeMap::new();
        let mut alias: BTreeMap<String, String> = BTreeMap::new();
        for (id, el) in elements {
            if alias.contains_key(&id) {
                return Err(Error::Resolution(format!("duplicate local id {id:?}")));
            }
            match by_key.get(&el.identity()) {
                Some(survivor) => {
                    alias.insert(id, survivor.clone());
                }
                None => {
                    by_key.insert(el.identity(), id.clone());
                    alias.insert(id.clone(), id.clone());
                    kept.insert(id, el);
                }
            }
        }
        let resolve = |id: &String| {
            alias
                .get(id)
                .cloned()
                .ok_or_else(|| Error::Resolution(format!("unknown local id {id:?}")))
        };
        let mut rels = Relations::new();
        for (label, pairs) in relations {
            let set = rels.entry(label).or_default();
            for (a, b) in pairs {
                set.insert((resolve(&a)?, resolve(&b)?));
            }
        }
        let mut cons = BTreeSet::new();
        for c in constraints {
            cons.insert(CompatConstraint::new(resolve(&c.from)?, resolve(&c.to)?, c.mode));
        }
        let status = match status {
            Status::Emerging(ids) => Status::Emerging(ids.iter().map(&resolve).collect::<Result<BTreeSet<_>>>()?),
            s => s,
        };
        let sys = System {
            elements: kept,
            relations: rels,
            constraints: cons,
            status,
            shared_carriers: BTreeSet::new(),
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn with_shared_carriers(mut self, carriers: impl IntoIterator<Item = String>) -> Self {
        self.shared_carriers.extend(carriers);
        self
    }

    /// Checks every structural invariant of the system.
    pub fn validate(&self) -> Result<()> {
        let known = |id: &String| -> Result<()> {
            if self.elements.contains_key(id) {
                Ok(())
            } else {
                Err(Error::Resolution(format!("unknown local id {id:?}")))
            }
        };
        for pairs in self.relations.values() {
            for (a, b) in pairs {
                known(a)?;
                known(b)?;
            }
        }
        for c in &self.constraints {
            known(&c.from)?;
            known(&c.to)?;
        }
        let mut seen = BTreeSet::new();
        for (id, el) in &self.elements {
            if !seen.insert(el.identity()) {
                return Err(Error::Precondition(format!(
                    "local id {id:?} duplicates another element"
                )));
            }
        }
        match &self.status {
            Status::Actualized => {
                if self.constraints.iter().any(|c| c.mode.is_exclusion()) {
                    return Err(Error::Precondition(
                        "an actualized system cannot carry incompatibility constraints".into(),
                    ));
                }
            }
            Status::Potential => {}
            Status::Emerging(ids) => {
                ids.iter().try_for_each(known)?;
                self.check_emerging_precedence(ids)?;
            }
        }
        Ok(())
    }

    fn check_emerging_precedence(&self, actualized: &BTreeSet<String>) -> Result<()> {
        let mut done_end: Option<Rational> = None;
        let mut todo_begin: Option<Rational> = None;
        for (id, el) in &self.elements {
            for e in el.events() {
                let t = e.time().ok_or_else(|| Error::MissingTime(e.name.clone()))?;
                let (lo, hi) = t.extent();
                if actualized.contains(id) {
                    done_end = Some(done_end.map_or(hi, |x| x.max(hi)));
                } else {
                    todo_begin = Some(todo_begin.map_or(lo, |x| x.min(lo)));
                }
            }
        }
        if let (Some(end), Some(begin)) = (done_end, todo_begin) {
            if end >= begin {
                return Err(Error::Ordering(format!(
                    "actualized part ends at {end}, potential part begins at {begin}"
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&T> {
        self.elements.get(id)
    }

    pub fn elements(&self) -> &BTreeMap<String, T> {
        &self.elements
    }

    pub fn ids(&self) -> impl Iterator<Item = &String> {
        self.elements.keys()
    }

    pub fn relations(&self) -> &Relations {
        &self.relations
    }

    pub fn constraints(&self) -> &BTreeSet<CompatConstraint> {
        &self.constraints
    }

    pub fn status(&self) -> &Status {
        &self.status
    }

    pub fn shared_carriers(&self) -> &BTreeSet<String> {
        &self.shared_carriers
    }

    pub fn relation_labels(&self) -> BTreeSet<String> {
        self.relations.keys().cloned().collect()
    }

    /// All events carried by the elements, in id order. For a process this is
    /// the disjoint union over its actions.
    pub fn all_events(&self) -> Vec<&Event> {
        let mut out = Vec::new();
        for el in self.elements.values() {
            el.for_each_event(&mut |e| out.push(e));
        }
        out
    }

    pub fn contains_element(&self, el: &T) -> bool {
        let key = el.identity();
        self.elements.values().any(|x| x.identity() == key)
    }

    /// The id holding an element identical to `el`. Tries `id` first and
    /// builds the key index in `index` only when that misses.
    fn locate<'a>(&'a self, id: &str, el: &T, index: &mut Option<BTreeMap<T::Key, &'a String>>) -> Option<&'a String> {
        if let Some((k, x)) = self.elements.get_key_value(id) {
            if x == el {
                return Some(k);
            }
        }
        index
            .get_or_insert_with(|| self.elements.iter().map(|(i, x)| (x.identity(), i)).collect())
            .get(&el.identity())
            .copied()
    }

    pub fn canonical(&self) -> Canonical<T> {
        let el = |id: &String| self.elements[id].clone();
        let relations = self
            .relations
            .iter()
            .filter(|(_, pairs)| !pairs.is_empty())
            .map(|(l, pairs)| (l.clone(), pairs.iter().map(|(a, b)| (el(a), el(b))).collect()))
            .collect();
        let constraints = self
            .constraints
            .iter()
            .map(|c| (el(&c.from), el(&c.to), c.mode))
            .collect();
        let status = match &self.status {
            Status::Actualized => CanonicalStatus::Actualized,
            Status::Potential => CanonicalStatus::Potential,
            Status::Emerging(ids) => CanonicalStatus::Emerging(ids.iter().map(el).collect()),
        };
        Canonical {
            elements: self.elements.values().cloned().collect(),
            relations,
            constraints,
            status,
            shared_carriers: self.shared_carriers.clone(),
        }
    }

    /// Restriction to `ids`, keeping only relations whose label is in `labels`
    /// and only pairs inside `ids`.
    pub fn restrict(&self, ids: &BTreeSet<String>, labels: &BTreeSet<String>) -> Result<Self> {
        for id in ids {
            if !self.elements.contains_key(id) {
                return Err(Error::Resolution(format!("unknown local id {id:?}")));
            }
        }
        for l in labels {
            if !self.relations.contains_key(l) {
                return Err(Error::Resolution(format!("unknown relation label {l:?}")));
            }
        }
        Ok(self.restrict_unchecked(ids, labels))
    }

    pub(crate) fn restrict_unchecked(&self, ids: &BTreeSet<String>, labels: &BTreeSet<String>) -> Self {
        let elements = self
            .elements
            .iter()
            .filter(|(id, _)| ids.contains(*id))
            .map(|(id, el)| (id.clone(), el.clone()))
            .collect();
        let relations = self
            .relations
            .iter()
            .filter(|(l, _)| labels.contains(*l))
            .map(|(l, pairs)| {
                let kept = pairs
                    .iter()
                    .filter(|(a, b)| ids.contains(a) && ids.contains(b))
                    .cloned()
                    .collect();
                (l.clone(), kept)
            })
            .collect();
        let constraints = self
            .constraints
            .iter()
            .filter(|c| ids.contains(&c.from) && ids.contains(&c.to))
            .cloned()
            .collect();
        let status = match &self.status {
            Status::Emerging(part) => {
                let part: BTreeSet<String> = part.intersection(ids).cloned().collect();
                if part.is_empty() {
                    Status::Potential
                } else {
                    Status::Emerging(part)
                }
            }
            s => s.clone(),
        };
        System {
            elements,
            relations,
            constraints,
            status,
            shared_carriers: self.shared_carriers.clone(),
        }
    }

    /// Union of elements and label-wise union of relations; nothing new is related.
    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        let mut by_key: Option<BTreeMap<T::Key, String>> = None;
        let mut alias: BTreeMap<&String, String> = BTreeMap::new();
        for (id, el) in &other.elements {
            if self.elements.get(id) == Some(el) {
                alias.insert(id, id.clone());
                continue;
            }
            let index =
                by_key.get_or_insert_with(|| out.elements.iter().map(|(i, x)| (x.identity(), i.clone())).collect());
            let key = el.identity();
            let target = match index.get(&key) {
                Some(existing) => existing.clone(),
                None => {
                    let nid = fresh_id(id, &out.elements);
                    out.elements.insert(nid.clone(), el.clone());
                    index.insert(key, nid.clone());
                    nid
                }
            };
            alias.insert(id, target);
        }
        for (label, pairs) in &other.relations {
            let set = out.relations.entry(label.clone()).or_default();
            for (a, b) in pairs {
                set.insert((alias[a].clone(), alias[b].clone()));
            }
        }
        for c in &other.constraints {
            out.constraints.insert(CompatConstraint::new(
                alias[&c.from].clone(),
                alias[&c.to].clone(),
                c.mode,
            ));
        }
        out.shared_carriers.extend(other.shared_carriers.iter().cloned());
        out.status = joint_status(&self.status, &other.status, || {
            let mut flagged: BTreeSet<String> = self
                .elements
                .keys()
                .filter(|id| self.status.flags(id))
                .cloned()
                .collect();
            flagged.extend(
                other
                    .elements
                    .keys()
                    .filter(|id| other.status.flags(id))
                    .map(|id| alias[id].clone()),
            );
            flagged
        });
        out
    }

    /// Elements present in both systems, with the relations and constraints both carry.
    pub fn meet(&self, other: &Self) -> Self {
        let mut index = None;
        let alias: BTreeMap<&String, &String> = self
            .elements
            .iter()
            .filter_map(|(id, el)| other.locate(id, el, &mut index).map(|oid| (id, oid)))
            .collect();
        let elements: BTreeMap<String, T> = alias
            .keys()
            .map(|id| ((*id).clone(), self.elements[*id].clone()))
            .collect();
        let mut relations = Relations::new();
        for (label, pairs) in &self.relations {
            let Some(theirs) = other.relations.get(label) else {
                continue;
            };
            let kept: BTreeSet<(String, String)> = pairs
                .iter()
                .filter(|(a, b)| match (alias.get(a), alias.get(b)) {
                    (Some(x), Some(y)) => theirs.contains(&((*x).clone(), (*y).clone())),
                    _ => false,
                })
                .cloned()
                .collect();
            relations.insert(label.clone(), kept);
        }
        let constraints = self
            .constraints
            .iter()
            .filter(|c| match (alias.get(&c.from), alias.get(&c.to)) {
                (Some(x), Some(y)) => {
                    other
                        .constraints
                        .contains(&CompatConstraint::new((*x).clone(), (*y).clone(), c.mode))
                }
                _ => false,
            })
            .cloned()
            .collect();
        let status = joint_status(&self.status, &other.status, || {
            alias
                .iter()
                .filter(|(id, oid)| self.status.flags(id) && other.status.flags(oid))
                .map(|(id, _)| (*id).clone())
                .collect()
        });
        System {
            elements,
            relations,
            constraints,
            status,
            shared_carriers: self
                .shared_carriers
                .intersection(&other.shared_carriers)
                .cloned()
                .collect(),
        }
    }

    /// Elements of `universe` not in `self`, with relations induced from `universe`.
    pub fn complement_in(&self, universe: &Self) -> Result<Self> {
        let mut inside = BTreeSet::new();
        let mut index = None;
        for (id, el) in &self.elements {
            match universe.locate(id, el, &mut index) {
                Some(id) => {
                    inside.insert(id.clone());
                }
                None => return Err(Error::Universe(format!("{el:?}"))),
            }
        }
        let rest: BTreeSet<String> = universe
            .elements
            .keys()
            .filter(|id| !inside.contains(*id))
            .cloned()
            .collect();
        Ok(universe.restrict_unchecked(&rest, &universe.relation_labels()))
    }

    /// Replaces every element by `f(id, element)` and collapses elements that
    /// became identical onto the smallest surviving id.
    pub fn map_elements(&self, mut f: impl FnMut(&str, &T) -> Result<T>) -> Result<Self> {
        let mapped: Vec<(String, T)> = self
            .elements
            .iter()
            .map(|(id, el)| Ok((id.clone(), f(id, el)?)))
            .collect::<Result<_>>()?;
        let mut out = System::form_unvalidated(mapped, &self.relations, &self.constraints, &self.status);
        out.shared_carriers = self.shared_carriers.clone();
        Ok(out)
    }

    fn form_unvalidated(
        elements: Vec<(String, T)>,
        relations: &Relations,
        constraints: &BTreeSet<CompatConstraint>,
        status: &Status,
    ) -> Self {
        let mut kept = BTreeMap::new();
        let mut by_key: BTreeMap<T::Key, String> = BTreeMap::new();
        let mut alias: BTreeMap<String, String> = BTreeMap::new();
        for (id, el) in elements {
            match by_key.get(&el.identity()) {
                Some(s) => {
                    alias.insert(id, s.clone());
                }
                None => {
                    by_key.insert(el.identity(), id.clone());
                    alias.insert(id.clone(), id.clone());
                    kept.insert(id, el);
                }
            }
        }
        let relations = relations
            .iter()
            .map(|(l, pairs)| {
                (
                    l.clone(),
                    pairs
                        .iter()
                        .map(|(a, b)| (alias[a].clone(), alias[b].clone()))
                        .collect(),
                )
            })
            .collect();
        let constraints = constraints
            .iter()
            .map(|c| CompatConstraint::new(alias[&c.from].clone(), alias[&c.to].clone(), c.mode))
            .collect();
        let status = match status {
            Status::Emerging(ids) => Status::Emerging(ids.iter().map(|i| alias[i].clone()).collect()),
            s => s.clone(),
        };
        System {
            elements: kept,
            relations,
            constraints,
            status,
            shared_carriers: BTreeSet::new(),
        }
    }

    /// Applies `f` to every event of every element.
    pub fn map_events(&self, mut f: impl FnMut(&Event) -> Result<Event>) -> Result<Self> {
        self.map_elements(|_, el| el.map_events(&mut f))
    }

    pub(crate) fn set_status(&mut self, status: Status) {
        self.status = status;
    }

    pub(crate) fn add_constraint(&mut self, c: CompatConstraint) {
        self.constraints.insert(c);
    }

    pub(crate) fn relations_mut(&mut self) -> &mut Relations {
        &mut self.relations
    }
}

fn joint_status(a: &Status, b: &Status, flagged: impl FnOnce() -> BTreeSet<String>) -> Status {
    match (a, b) {
        (Status::Actualized, Status::Actualized) => Status::Actualized,
        (Status::Potential, Status::Potential) => Status::Potential,
        _ => {
            let f = flagged();
            if f.is_empty() {
                Status::Potential
            } else {
                Status::Emerging(f)
            }
        }
    }
}

/// Point times over every event of a system, including the events of nested actions.
pub fn all_point_times<T: Element>(s: &System<T>) -> Result<Vec<Rational>> {
    s.all_events().into_iter().map(Event::point_time).collect()
}
