//! Subactions and subprocesses.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::system::{Relations, System};
use crate::model::{Action, Process};

/// The events `ids` of `a` with only the relations named in `labels`,
/// each restricted to pairs inside `ids`.
pub fn subaction(a: &Action, ids: &BTreeSet<String>, labels: &BTreeSet<String>) -> Result<Action> {
    a.restrict(ids, labels)
}

/// Subaction keeping every relation of `a`.
pub fn complete_subaction(a: &Action, ids: &BTreeSet<String>) -> Result<Action> {
    a.restrict(ids, &a.relation_labels())
}

pub fn subprocess(p: &Process, ids: &BTreeSet<String>, labels: &BTreeSet<String>) -> Result<Process> {
    p.restrict(ids, labels)
}

/// A subprocess that additionally carries `extra` relations over the kept actions.
pub fn enhanced_subprocess(
    p: &Process,
    ids: &BTreeSet<String>,
    labels: &BTreeSet<String>,
    extra: &Relations,
) -> Result<Process> {
    let mut out = p.restrict(ids, labels)?;
    for (label, pairs) in extra {
        for (a, b) in pairs {
            for id in [a, b] {
                if !ids.contains(id) {
                    return Err(Error::Resolution(format!(
                        "extra relation {label:?} names {id:?} outside the subprocess"
                    )));
                }
            }
        }
        out.relations_mut()
            .entry(label.clone())
            .or_default()
            .extend(pairs.iter().cloned());
    }
    Ok(out)
}

/// Whether `sub` is `sup` restricted to some ids, inheriting exactly the
/// relations `sup` carries between them for some label subset.
pub fn is_subsystem_of<T: crate::model::Element>(sub: &System<T>, sup: &System<T>) -> bool {
    if !sub.elements().iter().all(|(id, el)| sup.get(id) == Some(el)) {
        return false;
    }
    let ids: BTreeSet<String> = sub.ids().cloned().collect();
    sub.relations()
        .iter()
        .all(|(label, pairs)| match sup.relations().get(label) {
            Some(theirs) => {
                let induced: BTreeSet<(String, String)> = theirs
                    .iter()
                    .filter(|(a, b)| ids.contains(a) && ids.contains(b))
                    .cloned()
                    .collect();
                &induced == pairs
            }
            None => pairs.is_empty(),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{action_of, classify_action, form_action, ActionLabel, Event, Status};

    fn related() -> Action {
        let events = vec![
            ("x".to_string(), Event::point("a", 1)),
            ("y".to_string(), Event::point("b", 2)),
            ("z".to_string(), Event::point("c", 3)),
        ];
        let mut rels = Relations::new();
        rels.insert(
            "before".into(),
            [("x".into(), "y".into()), ("y".into(), "z".into())].into(),
        );
        rels.insert("causes".into(), [("x".into(), "z".into())].into());
        form_action(events, rels, BTreeSet::new(), Status::Actualized).unwrap()
    }

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn full_subaction_is_identity() {
        let a = related();
        assert_eq!(subaction(&a, &set(&["x", "y", "z"]), &a.relation_labels()).unwrap(), a);
        assert!(subaction(&a, &set(&[]), &set(&[])).unwrap().is_empty());
    }

    #[test]
    fn relations_are_induced() {
        let a = related();
        let s = complete_subaction(&a, &set(&["x", "y"])).unwrap();
        assert_eq!(s.relations()["before"], [("x".into(), "y".into())].into());
        assert!(s.relations()["causes"].is_empty());
        let only = subaction(&a, &set(&["x", "z"]), &set(&["causes"])).unwrap();
        assert!(!only.relations().contains_key("before"));
        assert!(is_subsystem_of(&only, &a));
    }

    #[test]
    fn unknown_ids_or_labels_are_errors() {
        let a = related();
        assert!(matches!(
            subaction(&a, &set(&["w"]), &set(&[])),
            Err(Error::Resolution(_))
        ));
        assert!(matches!(
            subaction(&a, &set(&["x"]), &set(&["nope"])),
            Err(Error::Resolution(_))
        ));
    }

    #[test]
    fn complete_subaction_of_coordinated_is_coordinated() {
        let a = action_of([Event::point("a", 1), Event::point("b", 1).with_space("n1")]);
        assert!(classify_action(&a).contains(&ActionLabel::Coordinated));
        let s = complete_subaction(&a, &set(&["e0"])).unwrap();
        assert!(classify_action(&s).contains(&ActionLabel::Coordinated));
    }

    #[test]
    fn enhanced_subprocess_with_no_extras_is_the_subprocess() {
        let p = crate::model::process_of([related(), action_of([Event::point("q", 9)])]);
        let ids = set(&["a0"]);
        let labels = BTreeSet::new();
        assert_eq!(
            enhanced_subprocess(&p, &ids, &labels, &Relations::new()).unwrap(),
            subprocess(&p, &ids, &labels).unwrap()
        );
        let mut extra = Relations::new();
        extra.insert("r".into(), [("a0".into(), "a1".into())].into());
        assert!(enhanced_subprocess(&p, &ids, &labels, &extra).is_err());
    }
}
