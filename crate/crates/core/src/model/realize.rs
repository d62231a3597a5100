//! Realizations of potential and emerging systems.
//!
//! A realization is a maximal set of elements such that every implication
//! (`compatible`, `strongly-compatible`) holds and no exclusion
//! (`incompatible`, `strongly-incompatible`) pair appears together. The weak
//! modes impose nothing. For an emerging system the actualized part is forced.
//!
//! The search assigns elements in id order with unit propagation and prunes a
//! branch as soon as some excluded element can no longer be blocked, since
//! such a branch cannot end in a maximal set.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::system::{Element, Status, System};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RealizationConfig {
    pub max_elements: usize,
}

impl Default for RealizationConfig {
    fn default() -> Self {
        RealizationConfig { max_elements: 16 }
    }
}

pub fn realizations<T: Element>(x: &System<T>) -> Result<Vec<System<T>>> {
    realizations_with(x, RealizationConfig::default())
}

/// Every realization of `x`, each actualized and carrying the induced relations.
/// An actualized `x` is its own single realization.
pub fn realizations_with<T: Element>(x: &System<T>, cfg: RealizationConfig) -> Result<Vec<System<T>>> {
    if *x.status() == Status::Actualized {
        return Ok(vec![x.clone()]);
    }
    let labels = x.relation_labels();
    Ok(realization_sets(x, cfg)?
        .into_iter()
        .map(|ids| {
            let mut r = x.restrict_unchecked(&ids, &labels);
            r.constraints.retain(|c| !c.mode.is_exclusion());
            r.set_status(Status::Actualized);
            r
        })
        .collect())
}

struct Graph {
    implies: Vec<Vec<usize>>,
    implied_by: Vec<Vec<usize>>,
    conflicts: Vec<Vec<usize>>,
    /// Elements in conflict with the implication closure of each element.
    closure_conflicts: Vec<Vec<usize>>,
    /// The implication closure of the element is itself contradictory.
    hopeless: Vec<bool>,
}

type State = Vec<Option<bool>>;

/// Realizations as sets of local ids.
pub fn realization_sets<T: Element>(x: &System<T>, cfg: RealizationConfig) -> Result<Vec<BTreeSet<String>>> {
    let ids: Vec<String> = x.ids().cloned().collect();
    let n = ids.len();
    if n > cfg.max_elements {
        return Err(Error::capacity(
            format!("realization search over {n} elements"),
            cfg.max_elements,
        ));
    }
    let index = |id: &String| ids.binary_search(id).expect("constraint ids resolve");
    let mut implies = vec![Vec::new(); n];
    let mut implied_by = vec![Vec::new(); n];
    let mut conflicts = vec![Vec::new(); n];
    for c in x.constraints() {
        let (a, b) = (index(&c.from), index(&c.to));
        if c.mode.is_implication() {
            implies[a].push(b);
            implied_by[b].push(a);
        } else if c.mode.is_exclusion() {
            conflicts[a].push(b);
            conflicts[b].push(a);
        }
    }
    let mut closure_conflicts = Vec::with_capacity(n);
    let mut hopeless = Vec::with_capacity(n);
    for i in 0..n {
        let mut closure = BTreeSet::from([i]);
        let mut stack = vec![i];
        while let Some(j) = stack.pop() {
            for &k in &implies[j] {
                if closure.insert(k) {
                    stack.push(k);
                }
            }
        }
        let cc: BTreeSet<usize> = closure.iter().flat_map(|&j| conflicts[j].iter().copied()).collect();
        hopeless.push(cc.iter().any(|k| closure.contains(k)));
        closure_conflicts.push(cc.into_iter().collect());
    }
    let g = Graph {
        implies,
        implied_by,
        conflicts,
        closure_conflicts,
        hopeless,
    };

    let mut st: State = vec![None; n];
    let forced: Vec<usize> = match x.status() {
        Status::Emerging(part) => part.iter().map(index).collect(),
        _ => Vec::new(),
    };
    for f in forced {
        if !include(&g, &mut st, f) {
            return Ok(Vec::new());
        }
    }
    let mut found = Vec::new();
    search(&g, st, &mut found);
    Ok(found
        .into_iter()
        .map(|set| set.into_iter().map(|i| ids[i].clone()).collect())
        .collect())
}

fn include(g: &Graph, st: &mut State, i: usize) -> bool {
    let mut todo = vec![(i, true)];
    while let Some((j, value)) = todo.pop() {
        match st[j] {
            Some(v) if v == value => continue,
            Some(_) => return false,
            None => {}
        }
        st[j] = Some(value);
        if value {
            todo.extend(g.implies[j].iter().map(|&k| (k, true)));
            todo.extend(g.conflicts[j].iter().map(|&k| (k, false)));
        } else {
            todo.extend(g.implied_by[j].iter().map(|&k| (k, false)));
        }
    }
    true
}

fn exclude(g: &Graph, st: &mut State, i: usize) -> bool {
    let mut todo = vec![i];
    while let Some(j) = todo.pop() {
        match st[j] {
            Some(false) => continue,
            Some(true) => return false,
            None => {}
        }
        st[j] = Some(false);
        todo.extend(g.implied_by[j].iter().copied());
    }
    true
}

fn blocked(g: &Graph, st: &State, j: usize) -> bool {
    g.hopeless[j] || g.closure_conflicts[j].iter().any(|&k| st[k] == Some(true))
}

fn can_still_be_blocked(g: &Graph, st: &State, j: usize) -> bool {
    g.hopeless[j] || g.closure_conflicts[j].iter().any(|&k| st[k] != Some(false))
}

fn search(g: &Graph, st: State, found: &mut Vec<BTreeSet<usize>>) {
    let excluded = || (0..st.len()).filter(|&j| st[j] == Some(false));
    if excluded().any(|j| !can_still_be_blocked(g, &st, j)) {
        return;
    }
    match st.iter().position(Option::is_none) {
        None => {
            if excluded().all(|j| blocked(g, &st, j)) {
                found.push((0..st.len()).filter(|&j| st[j] == Some(true)).collect());
            }
        }
        Some(i) => {
            let mut with = st.clone();
            if include(g, &mut with, i) {
                search(g, with, found);
            }
            let mut without = st;
            if exclude(g, &mut without, i) {
                search(g, without, found);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{form_action, Action, CompatConstraint, CompatMode, Event, Relations};

    fn potential(n: usize, cons: &[(usize, usize, CompatMode)]) -> Action {
        let events = (0..n)
            .map(|i| (format!("e{i}"), Event::point(format!("x{i}"), i as i64)))
            .collect();
        let cons = cons
            .iter()
            .map(|&(a, b, m)| CompatConstraint::new(format!("e{a}"), format!("e{b}"), m))
            .collect();
        form_action(events, Relations::new(), cons, Status::Potential).unwrap()
    }

    fn sets(a: &Action) -> BTreeSet<BTreeSet<String>> {
        realization_sets(a, RealizationConfig::default())
            .unwrap()
            .into_iter()
            .collect()
    }

    fn ids(xs: &[usize]) -> BTreeSet<String> {
        xs.iter().map(|i| format!("e{i}")).collect()
    }

    #[test]
    fn unconstrained_has_one_realization() {
        let a = potential(3, &[]);
        assert_eq!(sets(&a), [ids(&[0, 1, 2])].into());
        let r = realizations(&a).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(*r[0].status(), Status::Actualized);
    }

    #[test]
    fn incompatible_pair_splits() {
        let a = potential(2, &[(0, 1, CompatMode::Incompatible)]);
        assert_eq!(sets(&a), [ids(&[0]), ids(&[1])].into());
    }

    #[test]
    fn weak_modes_are_annotations() {
        let a = potential(
            2,
            &[
                (0, 1, CompatMode::WeaklyIncompatible),
                (1, 0, CompatMode::WeaklyCompatible),
            ],
        );
        assert_eq!(sets(&a), [ids(&[0, 1])].into());
    }

    #[test]
    fn implications_pull_in_dependents() {
        // 0 => 1, 1 excludes 2: either {0,1} or {2}.
        let a = potential(
            3,
            &[(0, 1, CompatMode::Compatible), (1, 2, CompatMode::StronglyIncompatible)],
        );
        assert_eq!(sets(&a), [ids(&[0, 1]), ids(&[2])].into());
    }

    #[test]
    fn self_contradicting_element_is_never_chosen() {
        // 0 => 1 and 0 excludes 1.
        let a = potential(
            2,
            &[(0, 1, CompatMode::StronglyCompatible), (0, 1, CompatMode::Incompatible)],
        );
        assert_eq!(sets(&a), [ids(&[1])].into());
    }

    #[test]
    fn emerging_part_is_forced() {
        let mut a = potential(3, &[(0, 1, CompatMode::Incompatible), (1, 2, CompatMode::Incompatible)]);
        a.set_status(Status::Emerging(ids(&[1])));
        assert_eq!(sets(&a), [ids(&[1])].into());
        a.set_status(Status::Emerging(ids(&[0])));
        assert_eq!(sets(&a), [ids(&[0, 2])].into());
    }

    #[test]
    fn contradictory_forcing_yields_nothing() {
        let mut a = potential(2, &[(0, 1, CompatMode::Incompatible)]);
        a.set_status(Status::Emerging(ids(&[0, 1])));
        assert!(sets(&a).is_empty());
    }

    #[test]
    fn bound_is_enforced() {
        let a = potential(17, &[]);
        assert!(matches!(realizations(&a), Err(Error::Capacity { limit: 16, .. })));
        assert!(realizations_with(&a, RealizationConfig { max_elements: 17 }).is_ok());
    }
}
