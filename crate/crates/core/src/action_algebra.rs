//! The action level: set compositions, temporal compositions, shifts,
//! renamings, projections and the parallelism measures.
//!
//! Temporal compositions and measures are generic over [`System`], so the
//! process level reuses them on the events of all its actions.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::event_algebra::{rename_event_in, shift_event, strong_seq_events, RenamingMap, TagShift};
use crate::model::{all_point_times, Action, Element, Event, SemanticMap, Status, System, Tag};
use crate::rational::Rational;

pub fn free_compose(a1: &Action, a2: &Action) -> Action {
    a1.union(a2)
}

pub fn meet(a1: &Action, a2: &Action) -> Action {
    a1.meet(a2)
}

/// Events of `universe` outside `a`.
pub fn complement(a: &Action, universe: &Action) -> Result<Action> {
    a.complement_in(universe)
}

/// How the events of an action are moved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionShift {
    /// One mapping for every event.
    Uniform(TagShift),
    /// A mapping per local id; every id must be covered.
    PerEvent(BTreeMap<String, TagShift>),
}

pub fn shift_action(a: &Action, shift: &ActionShift) -> Result<Action> {
    match shift {
        ActionShift::Uniform(sft) => a.map_events(|e| shift_event(e, sft)),
        ActionShift::PerEvent(table) => a.map_elements(|id, e| {
            let sft = table
                .get(id)
                .ok_or_else(|| Error::UndefinedShift(format!("no shift given for event {id:?}")))?;
            shift_event(e, sft)
        }),
    }
}

/// Renames every event; events that become identical are merged.
pub fn rename_action(a: &Action, rn: &RenamingMap) -> Result<Action> {
    rename_action_in(a, rn, &SemanticMap::identity())
}

pub fn rename_action_in(a: &Action, rn: &RenamingMap, sem: &SemanticMap) -> Result<Action> {
    a.map_events(|e| rename_event_in(e, rn, sem))
}

/// Translates every event of `s` by `delta`.
pub fn translate<T: Element>(s: &System<T>, delta: Rational) -> Result<System<T>> {
    if delta.is_zero() {
        return Ok(s.clone());
    }
    let sft = TagShift::Translate(delta);
    s.map_events(|e| shift_event(e, &sft))
}

fn times<T: Element>(s: &System<T>) -> Result<Vec<Rational>> {
    all_point_times(s)
}

/// Shift placing `s2` strictly after `s1`: `end(s1) - begin(s2) + gap`.
pub fn seq_delta<T: Element>(s1: &System<T>, s2: &System<T>, gap: Rational) -> Result<Rational> {
    if !gap.is_positive() {
        return Err(Error::InvalidParameter(format!("gap must be positive, got {gap}")));
    }
    let (t1, t2) = (times(s1)?, times(s2)?);
    match (t1.iter().max(), t2.iter().min()) {
        (Some(&end), Some(&begin)) => end.checked_sub(begin)?.checked_add(gap),
        _ => Ok(Rational::ZERO),
    }
}

/// Smallest non-negative multiple of 1/2 after which no time of `s2` meets a time of `s1`.
pub fn interleave_delta<T: Element>(s1: &System<T>, s2: &System<T>) -> Result<Rational> {
    let t1: BTreeSet<Rational> = times(s1)?.into_iter().collect();
    let t2: BTreeSet<Rational> = times(s2)?.into_iter().collect();
    // Each time pair rules out at most one candidate.
    for k in 0..=(t1.len() * t2.len()) as i64 {
        let delta = Rational::new(k, 2)?;
        let collides = t2
            .iter()
            .map(|t| t.checked_add(delta))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .any(|t| t1.contains(t));
        if !collides {
            return Ok(delta);
        }
    }
    unreachable!("some candidate avoids every collision")
}

/// The alignment `tA - tB` producing the most cross-parallel pairs, smallest on ties.
pub fn parallel_delta<T: Element>(s1: &System<T>, s2: &System<T>) -> Result<Rational> {
    if s1.all_events().is_empty() || s2.all_events().is_empty() {
        return Err(Error::Precondition(
            "free parallel composition needs two non-empty operands".into(),
        ));
    }
    let (t1, t2) = (count_times(&times(s1)?), count_times(&times(s2)?));
    let mut best: Option<(usize, Rational)> = None;
    for &ta in t1.keys() {
        for &tb in t2.keys() {
            let delta = ta.checked_sub(tb)?;
            let mut pairs = 0;
            for (&t, &c) in &t2 {
                if let Some(&d) = t1.get(&t.checked_add(delta)?) {
                    pairs += c * d;
                }
            }
            let better = match best {
                None => true,
                Some((n, d)) => pairs > n || (pairs == n && delta < d),
            };
            if better {
                best = Some((pairs, delta));
            }
        }
    }
    Ok(best.expect("both operands have times").1)
}

fn count_times(ts: &[Rational]) -> BTreeMap<Rational, usize> {
    let mut m = BTreeMap::new();
    for &t in ts {
        *m.entry(t).or_insert(0) += 1;
    }
    m
}

/// `s1 · s2`: `s2` moved wholly after `s1`, then joined.
pub fn free_seq<T: Element>(s1: &System<T>, s2: &System<T>, gap: Rational) -> Result<System<T>> {
    let delta = seq_delta(s1, s2, gap)?;
    Ok(s1.union(&translate(s2, delta)?))
}

/// `s1 Θ s2`: `s2` moved so that no two events of the operands share a time.
pub fn free_interleave<T: Element>(s1: &System<T>, s2: &System<T>) -> Result<System<T>> {
    let delta = interleave_delta(s1, s2)?;
    Ok(s1.union(&translate(s2, delta)?))
}

/// `π(s1, s2)`: `s2` moved to maximize parallel pairs across the operands.
pub fn free_parallel<T: Element>(s1: &System<T>, s2: &System<T>) -> Result<System<T>> {
    let delta = parallel_delta(s1, s2)?;
    Ok(s1.union(&translate(s2, delta)?))
}

/// Complete subaction on the events whose value lies in `w`.
pub fn project_values(a: &Action, w: &BTreeSet<String>) -> Action {
    project_values_in(a, w, &SemanticMap::identity())
}

pub fn project_values_in(a: &Action, w: &BTreeSet<String>, sem: &SemanticMap) -> Action {
    project_by(a, |e| w.contains(sem.value(&e.name)))
}

/// Complete subaction on the events whose tag lies in `k`.
pub fn project_tags(a: &Action, k: &BTreeSet<Tag>) -> Action {
    project_by(a, |e| k.contains(&e.tag))
}

fn project_by(a: &Action, keep: impl Fn(&Event) -> bool) -> Action {
    let ids: BTreeSet<String> = a
        .elements()
        .iter()
        .filter(|(_, e)| keep(e))
        .map(|(id, _)| id.clone())
        .collect();
    a.restrict_unchecked(&ids, &a.relation_labels())
}

/// Number of unordered pairs of distinct events sharing a time.
pub fn mpar_pairs<T: Element>(a: &System<T>) -> Result<u64> {
    Ok(count_times(&times(a)?)
        .values()
        .map(|&c| (c as u64) * (c as u64 - 1) / 2)
        .sum())
}

/// Number of pairs `(e, f)`, `e` from `a` and `f` from `b`, sharing a time.
pub fn mpar_cross<T: Element>(a: &System<T>, b: &System<T>) -> Result<u64> {
    let (ta, tb) = (count_times(&times(a)?), count_times(&times(b)?));
    Ok(ta
        .iter()
        .map(|(t, &c)| c as u64 * tb.get(t).copied().unwrap_or(0) as u64)
        .sum())
}

/// `|A|` minus the length of a maximal sequential subaction.
pub fn mpar_seq<T: Element>(a: &System<T>) -> Result<u64> {
    let ts = times(a)?;
    Ok((ts.len() - count_times(&ts).len()) as u64)
}

/// Parallel pairs between maximal sequential subactions of `a` and `b`;
/// every choice of those subactions gives the number of shared times.
pub fn mpar_seq_cross<T: Element>(a: &System<T>, b: &System<T>) -> Result<u64> {
    let ta: BTreeSet<Rational> = times(a)?.into_iter().collect();
    let tb: BTreeSet<Rational> = times(b)?.into_iter().collect();
    Ok(ta.intersection(&tb).count() as u64)
}

fn check_k(k: Rational) -> Result<()> {
    if k < Rational::ZERO || k > Rational::ONE {
        return Err(Error::InvalidParameter(format!("k must lie in [0, 1], got {k}")));
    }
    Ok(())
}

fn ratio(n: u64, d: usize) -> Result<Rational> {
    if d == 0 {
        return Err(Error::UndefinedRatio);
    }
    let n = i64::try_from(n).map_err(|_| Error::Overflow)?;
    let d = i64::try_from(d).map_err(|_| Error::Overflow)?;
    Rational::new(n, d)
}

/// `k <= m_par(A) / |A|`.
pub fn is_k_parallel<T: Element>(a: &System<T>, k: Rational) -> Result<bool> {
    check_k(k)?;
    Ok(k <= ratio(mpar_seq(a)?, a.all_events().len())?)
}

/// `k <= m_par(A, B) / min(|A|, |B|)`.
pub fn is_k_parallel_pair<T: Element>(a: &System<T>, b: &System<T>, k: Rational) -> Result<bool> {
    check_k(k)?;
    let n = a.all_events().len().min(b.all_events().len());
    Ok(k <= ratio(mpar_seq_cross(a, b)?, n)?)
}

/// Matches local ids of a first operand with local ids of a second.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Pairing {
    pairs: Vec<(String, String)>,
}

impl Pairing {
    pub fn new(pairs: Vec<(String, String)>) -> Result<Self> {
        let (mut left, mut right) = (BTreeSet::new(), BTreeSet::new());
        for (a, b) in &pairs {
            if !left.insert(a) || !right.insert(b) {
                return Err(Error::InvalidParameter(format!("pairing repeats an id in ({a}, {b})")));
            }
        }
        Ok(Pairing { pairs })
    }

    pub fn empty() -> Self {
        Pairing::default()
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    fn left(&self) -> BTreeSet<String> {
        self.pairs.iter().map(|(a, _)| a.clone()).collect()
    }

    fn right(&self) -> BTreeSet<String> {
        self.pairs.iter().map(|(_, b)| b.clone()).collect()
    }
}

fn operand_status(a: &Status, b: &Status) -> Status {
    if *a == Status::Actualized && *b == Status::Actualized {
        Status::Actualized
    } else {
        Status::Potential
    }
}

fn resolve<'a>(a: &'a Action, id: &str) -> Result<&'a Event> {
    a.get(id)
        .ok_or_else(|| Error::Resolution(format!("pairing names unknown event {id:?}")))
}

/// The linked events of a pairing, without any shift.
fn linked_events(a1: &Action, a2: &Action, pairing: &Pairing) -> Result<Action> {
    let events = pairing
        .pairs
        .iter()
        .map(|(x, y)| Ok((format!("{x};{y}"), strong_seq_events(resolve(a1, x)?, resolve(a2, y)?)?)))
        .collect::<Result<Vec<_>>>()?;
    Action::form(
        events,
        Default::default(),
        BTreeSet::new(),
        operand_status(a1.status(), a2.status()),
    )
}

/// Strong linking of two actions already in time order; the pairing must
/// cover every event of both.
pub(crate) fn link_strong(a1: &Action, a2: &Action, pairing: &Pairing) -> Result<Action> {
    let ids1: BTreeSet<String> = a1.ids().cloned().collect();
    let ids2: BTreeSet<String> = a2.ids().cloned().collect();
    let linked = linked_events(a1, a2, pairing)?;
    if pairing.left() != ids1 || pairing.right() != ids2 {
        return Err(Error::Coverage(
            "strong composition must pair every event of both operands".into(),
        ));
    }
    Ok(linked)
}

/// Mixed linking of two actions already in time order.
pub(crate) fn link_mixed(a1: &Action, a2: &Action, pairing: &Pairing) -> Result<Action> {
    let linked = linked_events(a1, a2, pairing)?;
    let rest = |a: &Action, used: BTreeSet<String>| {
        let keep: BTreeSet<String> = a.ids().filter(|id| !used.contains(*id)).cloned().collect();
        a.restrict_unchecked(&keep, &a.relation_labels())
    };
    let left = rest(a1, pairing.left());
    let right = rest(a2, pairing.right());
    Ok(left.union(&right).union(&linked))
}

/// `A1 ∘ A2`: after the free sequential shift, every paired couple of
/// events is replaced by its strong sequential composition.
pub fn strong_seq_actions(a1: &Action, a2: &Action, pairing: &Pairing) -> Result<Action> {
    let shifted = translate(a2, seq_delta(a1, a2, Rational::ONE)?)?;
    link_strong(a1, &shifted, pairing)
}

/// `A1 ◊ A2`: paired events are linked, the others kept as in `A1 · A2`.
pub fn mixed_seq_actions(a1: &Action, a2: &Action, pairing: &Pairing) -> Result<Action> {
    let shifted = translate(a2, seq_delta(a1, a2, Rational::ONE)?)?;
    link_mixed(a1, &shifted, pairing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{action_of, classify_action, ActionLabel};

    fn pts(points: &[(&str, i64)]) -> Action {
        action_of(points.iter().map(|&(n, t)| Event::point(n, t)))
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn set_compositions() {
        let a = pts(&[("a", 1), ("b", 2)]);
        let b = pts(&[("b", 2), ("c", 3)]);
        assert_eq!(free_compose(&a, &a), a);
        assert_eq!(free_compose(&a, &Action::empty(Status::Actualized)), a);
        assert_eq!(free_compose(&pts(&[("a", 1)]), &pts(&[("b", 2)])), a);
        assert_eq!(meet(&a, &b), pts(&[("b", 2)]));
        assert_eq!(meet(&a, &free_compose(&a, &b)), a);
        let u = free_compose(&a, &b);
        assert!(complement(&Action::empty(Status::Actualized), &u).unwrap() == u);
        assert!(complement(&u, &u).unwrap().is_empty());
        assert!(matches!(complement(&pts(&[("z", 9)]), &u), Err(Error::Universe(_))));
    }

    #[test]
    fn free_sequential() {
        let out = free_seq(&pts(&[("a", 1), ("b", 2)]), &pts(&[("c", 1)]), Rational::ONE).unwrap();
        assert_eq!(out, pts(&[("a", 1), ("b", 2), ("c", 3)]));
        let a = pts(&[("a", 4)]);
        let none = Action::empty(Status::Actualized);
        assert_eq!(free_seq(&none, &a, Rational::ONE).unwrap(), a);
        assert_eq!(free_seq(&a, &none, Rational::ONE).unwrap(), a);
        assert!(free_seq(&a, &a, Rational::ZERO).is_err());
        let ext = action_of([Event::extended("x", 0.into(), 1.into()).unwrap()]);
        assert!(matches!(
            free_seq(&ext, &a, Rational::ONE),
            Err(Error::UnsupportedShape(_))
        ));
    }

    #[test]
    fn free_interleaving() {
        let out = free_interleave(&pts(&[("a", 1)]), &pts(&[("b", 1)])).unwrap();
        assert_eq!(out, action_of([Event::point("a", 1), Event::point("b", r(3, 2))]));
        let out = free_interleave(&pts(&[("a", 1)]), &pts(&[("b", 2)])).unwrap();
        assert_eq!(out, pts(&[("a", 1), ("b", 2)]));
    }

    #[test]
    fn free_parallel_alignment() {
        let a = pts(&[("a", 1), ("b", 2)]);
        let b = pts(&[("c", 4), ("d", 5)]);
        assert_eq!(parallel_delta(&a, &b).unwrap(), (-3).into());
        let out = free_parallel(&a, &b).unwrap();
        assert_eq!(mpar_pairs(&out).unwrap(), 2);
        let out = free_parallel(&pts(&[("a", 1)]), &pts(&[("b", 7)])).unwrap();
        assert_eq!(out, pts(&[("a", 1), ("b", 1)]));
        let none = Action::empty(Status::Actualized);
        assert!(matches!(free_parallel(&a, &none), Err(Error::Precondition(_))));
    }

    #[test]
    fn shifts_and_renamings() {
        let a = pts(&[("a", 1), ("b", 2)]);
        assert_eq!(
            shift_action(&a, &ActionShift::Uniform(TagShift::Translate(Rational::ZERO))).unwrap(),
            a
        );
        let moved = shift_action(&a, &ActionShift::Uniform(TagShift::Translate(3.into()))).unwrap();
        assert!(classify_action(&moved).contains(&ActionLabel::Sequential));
        let partial = ActionShift::PerEvent([("e0".to_string(), TagShift::Translate(1.into()))].into());
        assert!(matches!(shift_action(&a, &partial), Err(Error::UndefinedShift(_))));
        let rn = RenamingMap::new([("a".to_string(), "b".to_string()), ("b".to_string(), "b".to_string())].into());
        assert_eq!(
            rename_action(&pts(&[("a", 1), ("b", 1)]), &rn).unwrap(),
            pts(&[("b", 1)])
        );
    }

    #[test]
    fn projections() {
        let a = pts(&[("a", 1), ("b", 2)]);
        let all: BTreeSet<String> = ["a".into(), "b".into()].into();
        assert_eq!(project_values(&a, &all), a);
        assert!(project_values(&a, &BTreeSet::new()).is_empty());
        let k: BTreeSet<Tag> = [Tag::at(2.into())].into();
        assert_eq!(project_tags(&a, &k), pts(&[("b", 2)]));
    }

    #[test]
    fn measures() {
        let a = pts(&[("a", 1), ("b", 1), ("c", 2)]);
        assert_eq!((mpar_pairs(&a).unwrap(), mpar_seq(&a).unwrap()), (1, 1));
        let t = pts(&[("a", 1), ("b", 1), ("c", 1)]);
        assert_eq!((mpar_pairs(&t).unwrap(), mpar_seq(&t).unwrap()), (3, 2));
        let x = pts(&[("a", 1), ("b", 2)]);
        let y = pts(&[("c", 1), ("d", 2)]);
        assert_eq!(mpar_cross(&x, &y).unwrap(), 2);
        assert_eq!(mpar_seq_cross(&x, &y).unwrap(), 2);
        assert_eq!(mpar_cross(&x, &pts(&[("z", 9)])).unwrap(), 0);
        assert_eq!(mpar_cross(&a, &a).unwrap(), 3 + 2 * mpar_pairs(&a).unwrap());
    }

    #[test]
    fn k_parallelism() {
        let seq = pts(&[("a", 1), ("b", 2)]);
        assert!(is_k_parallel_pair(&seq, &seq, Rational::ONE).unwrap());
        assert!(is_k_parallel(&seq, Rational::ZERO).unwrap());
        assert!(!is_k_parallel(&seq, r(1, 10)).unwrap());
        assert!(is_k_parallel(&pts(&[("a", 1), ("b", 1)]), Rational::HALF).unwrap());
        let none = Action::empty(Status::Actualized);
        assert!(matches!(
            is_k_parallel(&none, Rational::ZERO),
            Err(Error::UndefinedRatio)
        ));
        assert!(matches!(is_k_parallel(&seq, 2.into()), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn strong_and_mixed() {
        let a1 = action_of([Event::point("a", 1).with_states("s0", "s1")]);
        let a2 = action_of([Event::point("b", 1).with_states("s1", "s2")]);
        let p = Pairing::new(vec![("e0".into(), "e0".into())]).unwrap();
        let out = strong_seq_actions(&a1, &a2, &p).unwrap();
        assert_eq!(out, action_of([Event::point("a;b", 2).with_states("s0", "s2")]));
        assert_eq!(
            mixed_seq_actions(&a1, &a2, &Pairing::empty()).unwrap(),
            free_seq(&a1, &a2, Rational::ONE).unwrap()
        );
        assert!(matches!(
            strong_seq_actions(&a1, &a2, &Pairing::empty()),
            Err(Error::Coverage(_))
        ));
        let bad = action_of([Event::point("b", 1).with_states("s7", "s2")]);
        assert!(matches!(strong_seq_actions(&a1, &bad, &p), Err(Error::Link(_))));
        assert!(Pairing::new(vec![("x".into(), "y".into()), ("x".into(), "z".into())]).is_err());
    }

    #[test]
    fn mixed_keeps_unpaired_events() {
        let a1 = action_of([Event::point("a", 1).with_states("s0", "s1"), Event::point("c", 0)]);
        let a2 = action_of([Event::point("b", 1).with_states("s1", "s2"), Event::point("d", 2)]);
        let p = Pairing::new(vec![("e0".into(), "e0".into())]).unwrap();
        let out = mixed_seq_actions(&a1, &a2, &p).unwrap();
        let names: BTreeSet<_> = out.all_events().iter().map(|e| e.to_string()).collect();
        assert_eq!(names, ["a;b@2".to_string(), "c@0".into(), "d@3".into()].into());
    }
}
