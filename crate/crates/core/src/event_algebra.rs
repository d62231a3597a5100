//! The event level: compositions, shifts, renamings and metrics on events.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{parallel, Event, EventKind, SemanticMap, Tag};
use crate::rational::Rational;

/// A binary operation on names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NameCompositionRule {
    Concat(String),
    Left,
    Right,
    Table(BTreeMap<(String, String), String>),
}

impl NameCompositionRule {
    pub fn apply(&self, a: &str, b: &str) -> Result<String> {
        match self {
            NameCompositionRule::Concat(sep) => Ok(format!("{a}{sep}{b}")),
            NameCompositionRule::Left => Ok(a.to_string()),
            NameCompositionRule::Right => Ok(b.to_string()),
            NameCompositionRule::Table(t) => t
                .get(&(a.to_string(), b.to_string()))
                .cloned()
                .ok_or_else(|| Error::UndefinedComposition(format!("no entry for ({a}, {b})"))),
        }
    }
}

/// A mapping of tags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TagShift {
    /// Adds `delta` to every temporal value; space is unchanged.
    Translate(Rational),
    Table(BTreeMap<Tag, Tag>),
}

impl TagShift {
    pub fn apply(&self, tag: &Tag) -> Result<Tag> {
        match self {
            TagShift::Translate(d) => Ok(Tag {
                time: tag.time.as_ref().map(|t| t.map(|v| v.checked_add(*d))).transpose()?,
                space: tag.space.clone(),
            }),
            TagShift::Table(t) => t
                .get(tag)
                .cloned()
                .ok_or_else(|| Error::UndefinedShift(format!("no image for tag {tag:?}"))),
        }
    }
}

/// A mapping of values, optionally certified injective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenamingMap {
    map: BTreeMap<String, String>,
    injective: bool,
}

impl RenamingMap {
    pub fn new(map: BTreeMap<String, String>) -> Self {
        RenamingMap { map, injective: false }
    }

    /// Fails unless no two keys share an image.
    pub fn injective(map: BTreeMap<String, String>) -> Result<Self> {
        let mut images = std::collections::BTreeSet::new();
        for v in map.values() {
            if !images.insert(v) {
                return Err(Error::InvalidParameter(format!(
                    "renaming is not injective: {v:?} has two preimages"
                )));
            }
        }
        Ok(RenamingMap { map, injective: true })
    }

    pub fn identity_on<'a>(values: impl IntoIterator<Item = &'a str>) -> Self {
        RenamingMap {
            map: values.into_iter().map(|v| (v.to_string(), v.to_string())).collect(),
            injective: true,
        }
    }

    pub fn is_injective(&self) -> bool {
        self.injective
    }

    pub fn apply(&self, value: &str) -> Result<&str> {
        self.map
            .get(value)
            .map(String::as_str)
            .ok_or_else(|| Error::UndefinedRenaming(format!("no image for value {value:?}")))
    }
}

/// Direct parallel composition: `(m(d1, d2), t)` for parallel events.
pub fn m_compose(e1: &Event, e2: &Event, m: &NameCompositionRule) -> Result<Event> {
    if !parallel(e1, e2)? {
        return Err(Error::Precondition(format!("{e1} and {e2} are not parallel")));
    }
    Ok(Event {
        name: m.apply(&e1.name, &e2.name)?,
        kind: EventKind::Generic,
        carrier: None,
        in_state: None,
        out_state: None,
        observable: e1.observable || e2.observable,
        category: None,
        tag: e1.tag.clone(),
    })
}

/// Moves the event to `sft(tag)`; nothing else changes.
pub fn shift_event(e: &Event, sft: &TagShift) -> Result<Event> {
    Ok(Event {
        tag: sft.apply(&e.tag)?,
        ..e.clone()
    })
}

/// Composition after moving `e1` onto `e2`: `(m(d1, d2), tag(e2))`.
pub fn shifted_m_compose(e1: &Event, e2: &Event, m: &NameCompositionRule, sft: &TagShift) -> Result<Event> {
    let moved = sft.apply(&e1.tag)?;
    if moved != e2.tag {
        return Err(Error::ShiftMismatch(format!("{e1} lands on {moved:?}, not on {e2}")));
    }
    Ok(Event {
        name: m.apply(&e1.name, &e2.name)?,
        kind: EventKind::Generic,
        carrier: None,
        in_state: None,
        out_state: None,
        observable: e1.observable || e2.observable,
        category: None,
        tag: e2.tag.clone(),
    })
}

/// Replaces the event's value with `rn(value)` under identity semantics.
pub fn rename_event(e: &Event, rn: &RenamingMap) -> Result<Event> {
    rename_event_in(e, rn, &SemanticMap::identity())
}

/// Renaming through a semantic map: the event is renamed to `rn(sem(name))`.
pub fn rename_event_in(e: &Event, rn: &RenamingMap, sem: &SemanticMap) -> Result<Event> {
    Ok(Event {
        name: rn.apply(sem.value(&e.name))?.to_string(),
        ..e.clone()
    })
}

/// Strong sequential composition: links `e1` into `e2` through the state
/// `out(e1) = in(e2)`. The result spans `in(e1) -> out(e2)`, is named
/// `name1;name2` and sits at `tag(e2)`.
pub fn strong_seq_events(e1: &Event, e2: &Event) -> Result<Event> {
    let (Some(in1), Some(out1)) = (&e1.in_state, &e1.out_state) else {
        return Err(Error::Link(format!("{e1} carries no states")));
    };
    let (Some(in2), Some(out2)) = (&e2.in_state, &e2.out_state) else {
        return Err(Error::Link(format!("{e2} carries no states")));
    };
    if out1 != in2 {
        return Err(Error::Link(format!("{e1} ends in {out1:?} but {e2} starts in {in2:?}")));
    }
    let (t1, t2) = (e1.point_time()?, e2.point_time()?);
    if t1 >= t2 {
        return Err(Error::Ordering(format!("{e1} does not precede {e2}")));
    }
    Ok(Event {
        name: format!("{};{}", e1.name, e2.name),
        tag: e2.tag.clone(),
        kind: EventKind::Generic,
        carrier: None,
        in_state: Some(in1.clone()),
        out_state: Some(out2.clone()),
        observable: e1.observable && e2.observable,
        category: None,
    })
}

pub trait NameMetric {
    fn distance(&self, a: &str, b: &str) -> Rational;
}

pub trait TagMetric {
    fn distance(&self, a: &Tag, b: &Tag) -> Result<Rational>;
}

/// 0 for equal names, 1 otherwise.
#[derive(Clone, Copy, Debug, Default)]
pub struct DiscreteNames;

impl NameMetric for DiscreteNames {
    fn distance(&self, a: &str, b: &str) -> Rational {
        if a == b {
            Rational::ZERO
        } else {
            Rational::ONE
        }
    }
}

/// `|t1 - t2|` on point times, plus 1 when the space nodes differ.
#[derive(Clone, Copy, Debug, Default)]
pub struct TimeAndNode;

impl TagMetric for TimeAndNode {
    fn distance(&self, a: &Tag, b: &Tag) -> Result<Rational> {
        let time = match (&a.time, &b.time) {
            (None, None) => Rational::ZERO,
            (Some(x), Some(y)) => match (x.as_point(), y.as_point()) {
                (Some(s), Some(t)) => s.abs_diff(t)?,
                _ => return Err(Error::UnsupportedShape("tag metric needs point times".into())),
            },
            _ => return Err(Error::ShapeMismatch("one tag has no time".into())),
        };
        let space = if a.space == b.space {
            Rational::ZERO
        } else {
            Rational::ONE
        };
        time.checked_add(space)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricMode {
    Euclidean,
    Shannon,
}

/// Extends a name metric and a tag metric to events:
/// `sqrt(dN^2 + dST^2)` or `dN + dST`.
pub fn distance(e1: &Event, e2: &Event, mode: MetricMode, names: &dyn NameMetric, tags: &dyn TagMetric) -> Result<f64> {
    let dn = names.distance(&e1.name, &e2.name);
    let dt = tags.distance(&e1.tag, &e2.tag)?;
    Ok(match mode {
        MetricMode::Euclidean => {
            let (x, y) = (dn.to_f64(), dt.to_f64());
            (x * x + y * y).sqrt()
        }
        MetricMode::Shannon => dn.checked_add(dt)?.to_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn concat() -> NameCompositionRule {
        NameCompositionRule::Concat(String::new())
    }

    #[test]
    fn m_composition() {
        let (a, b) = (Event::point("a", 5), Event::point("b", 5));
        assert_eq!(m_compose(&a, &b, &concat()).unwrap(), Event::point("ab", 5));
        assert_eq!(
            m_compose(&a, &b, &NameCompositionRule::Left).unwrap(),
            Event::point("a", 5)
        );
        assert!(matches!(
            m_compose(&Event::point("a", 1), &Event::point("b", 2), &concat()),
            Err(Error::Precondition(_))
        ));
        let table = NameCompositionRule::Table(BTreeMap::new());
        assert!(matches!(m_compose(&a, &b, &table), Err(Error::UndefinedComposition(_))));
    }

    #[test]
    fn shifting() {
        let a = Event::point("a", 2).with_states("s", "t").hidden();
        let moved = shift_event(&a, &TagShift::Translate(3.into())).unwrap();
        assert_eq!(moved.point_time().unwrap(), 5.into());
        assert_eq!((moved.name.as_str(), moved.observable), ("a", false));
        assert_eq!(moved.in_state.as_deref(), Some("s"));
        assert_eq!(shift_event(&a, &TagShift::Translate(Rational::ZERO)).unwrap(), a);
        assert!(matches!(
            shift_event(&a, &TagShift::Table(BTreeMap::new())),
            Err(Error::UndefinedShift(_))
        ));
    }

    #[test]
    fn shifted_composition() {
        let (a, b) = (Event::point("a", 1), Event::point("b", 4));
        let r = shifted_m_compose(&a, &b, &concat(), &TagShift::Translate(3.into())).unwrap();
        assert_eq!(r, Event::point("ab", 4));
        assert!(parallel(&r, &b).unwrap());
        assert!(matches!(
            shifted_m_compose(&a, &b, &concat(), &TagShift::Translate(2.into())),
            Err(Error::ShiftMismatch(_))
        ));
    }

    #[test]
    fn renaming() {
        let rn = RenamingMap::new([("a".to_string(), "x".to_string())].into());
        assert_eq!(rename_event(&Event::point("a", 1), &rn).unwrap(), Event::point("x", 1));
        assert!(matches!(
            rename_event(&Event::point("b", 1), &rn),
            Err(Error::UndefinedRenaming(_))
        ));
        let id = RenamingMap::identity_on(["a"]);
        assert_eq!(rename_event(&Event::point("a", 1), &id).unwrap(), Event::point("a", 1));
        let dup = [("a".to_string(), "x".to_string()), ("b".to_string(), "x".to_string())];
        assert!(RenamingMap::injective(dup.into()).is_err());
    }

    #[test]
    fn renaming_through_semantics() {
        let mut sem = SemanticMap::identity();
        sem.entries.insert("a".into(), "v".into());
        let rn = RenamingMap::new([("v".to_string(), "w".to_string())].into());
        assert_eq!(rename_event_in(&Event::point("a", 1), &rn, &sem).unwrap().name, "w");
    }

    #[test]
    fn strong_sequential_events() {
        let e1 = Event::point("a", 1).with_states("s0", "s1");
        let e2 = Event::point("b", 2).with_states("s1", "s2");
        let r = strong_seq_events(&e1, &e2).unwrap();
        assert_eq!(r, Event::point("a;b", 2).with_states("s0", "s2"));
        let bad = Event::point("b", 2).with_states("s9", "s2");
        assert!(matches!(strong_seq_events(&e1, &bad), Err(Error::Link(_))));
        let early = Event::point("a", 3).with_states("s0", "s1");
        assert!(matches!(strong_seq_events(&early, &e2), Err(Error::Ordering(_))));
        assert!(matches!(
            strong_seq_events(&Event::point("a", 1), &e2),
            Err(Error::Link(_))
        ));
    }

    struct Fixed(Rational);
    impl NameMetric for Fixed {
        fn distance(&self, a: &str, b: &str) -> Rational {
            if a == b {
                Rational::ZERO
            } else {
                self.0
            }
        }
    }

    #[test]
    fn metric_extensions() {
        let (a, b) = (Event::point("a", 0), Event::point("b", 4));
        let names = Fixed(3.into());
        let e = distance(&a, &b, MetricMode::Euclidean, &names, &TimeAndNode).unwrap();
        let s = distance(&a, &b, MetricMode::Shannon, &names, &TimeAndNode).unwrap();
        assert_eq!((e, s), (5.0, 7.0));
        for mode in [MetricMode::Euclidean, MetricMode::Shannon] {
            assert_eq!(distance(&a, &a, mode, &DiscreteNames, &TimeAndNode).unwrap(), 0.0);
        }
        let far = Event::point("a", 0).with_space("n1");
        assert_eq!(
            distance(&a, &far, MetricMode::Shannon, &DiscreteNames, &TimeAndNode).unwrap(),
            1.0
        );
    }
}
