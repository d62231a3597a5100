//! Temporal relations between events and between actions.

use crate::error::{Error, Result};
use crate::model::event::{Event, TemporalCoord};
use crate::model::system::{Element, System};
use crate::rational::Rational;

fn times<'a>(e1: &'a Event, e2: &'a Event) -> Result<(&'a TemporalCoord, &'a TemporalCoord)> {
    let t1 = e1.time().ok_or_else(|| Error::MissingTime(e1.name.clone()))?;
    let t2 = e2.time().ok_or_else(|| Error::MissingTime(e2.name.clone()))?;
    Ok((t1, t2))
}

fn shape_mismatch(e1: &Event, e2: &Event) -> Error {
    Error::ShapeMismatch(format!("{e1} vs {e2}"))
}

/// Simultaneity: equal points, or intervals with equal begins and equal ends.
pub fn parallel(e1: &Event, e2: &Event) -> Result<bool> {
    match (e1.time(), e2.time()) {
        (Some(TemporalCoord::Point(a)), Some(TemporalCoord::Point(b))) => Ok(a == b),
        (Some(TemporalCoord::Interval(b1, f1)), Some(TemporalCoord::Interval(b2, f2))) => Ok(b1 == b2 && f1 == f2),
        _ => Err(shape_mismatch(e1, e2)),
    }
}

/// Approximate simultaneity within `r` (strict).
pub fn r_parallel(e1: &Event, e2: &Event, r: Rational) -> Result<bool> {
    if !r.is_positive() {
        return Err(Error::InvalidParameter(format!("r must be positive, got {r}")));
    }
    match (e1.time(), e2.time()) {
        (Some(TemporalCoord::Point(a)), Some(TemporalCoord::Point(b))) => Ok(a.abs_diff(*b)? < r),
        (Some(TemporalCoord::Interval(b1, f1)), Some(TemporalCoord::Interval(b2, f2))) => {
            Ok(b1.abs_diff(*b2)? < r && f1.abs_diff(*f2)? < r)
        }
        _ => Err(shape_mismatch(e1, e2)),
    }
}

/// One event starts before the other ends. A point `t` is the interval
/// `[t, t]`; two equal degenerate intervals coexist.
pub fn coexisting(e1: &Event, e2: &Event) -> Result<bool> {
    let (t1, t2) = times(e1, e2)?;
    let (b1, f1) = t1.extent();
    let (b2, f2) = t2.extent();
    if b1 == f1 && b2 == f2 {
        return Ok(b1 == b2);
    }
    Ok(b1 < f2 && b2 < f1)
}

pub fn separable_events(e1: &Event, e2: &Event) -> Result<bool> {
    coexisting(e1, e2).map(|c| !c)
}

/// `(begin, end)` over every temporal value of every event of `a`.
pub fn extent<T: Element>(a: &System<T>) -> Result<(Rational, Rational)> {
    let mut acc: Option<(Rational, Rational)> = None;
    for e in a.all_events() {
        let t = e.time().ok_or_else(|| Error::MissingTime(e.name.clone()))?;
        let (lo, hi) = t.extent();
        acc = Some(match acc {
            None => (lo, hi),
            Some((l, h)) => (l.min(lo), h.max(hi)),
        });
    }
    acc.ok_or(Error::UndefinedExtent)
}

pub fn action_begin<T: Element>(a: &System<T>) -> Result<Rational> {
    extent(a).map(|(b, _)| b)
}

pub fn action_end<T: Element>(a: &System<T>) -> Result<Rational> {
    extent(a).map(|(_, e)| e)
}

/// One ends no later than the other begins.
pub fn separable_actions<T: Element>(a: &System<T>, b: &System<T>) -> Result<bool> {
    let (ba, ea) = extent(a)?;
    let (bb, eb) = extent(b)?;
    Ok(ea <= bb || eb <= ba)
}

/// One ends strictly before the other begins.
pub fn strictly_separable<T: Element>(a: &System<T>, b: &System<T>) -> Result<bool> {
    let (ba, ea) = extent(a)?;
    let (bb, eb) = extent(b)?;
    Ok(ea < bb || eb < ba)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::action_of;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn iv(name: &str, b: i64, e: i64) -> Event {
        Event::extended(name, b.into(), e.into()).unwrap()
    }

    #[test]
    fn parallel_examples() {
        assert!(parallel(&Event::point("a", 1), &Event::point("b", 1)).unwrap());
        assert!(!parallel(&Event::point("a", 1), &Event::point("b", 2)).unwrap());
        assert!(parallel(&iv("a", 1, 3), &iv("b", 1, 3)).unwrap());
        assert!(!parallel(&iv("a", 1, 3), &iv("b", 1, 4)).unwrap());
    }

    #[test]
    fn parallel_rejects_mixed_or_missing_shapes() {
        let p = Event::point("a", 1);
        assert!(matches!(parallel(&p, &iv("b", 1, 1)), Err(Error::ShapeMismatch(_))));
        assert!(matches!(parallel(&p, &Event::named("c")), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn r_parallel_examples() {
        let one = Rational::ONE;
        let a = Event::point("a", 0);
        assert!(r_parallel(&a, &Event::point("b", q(1, 2)), one).unwrap());
        assert!(!r_parallel(&a, &Event::point("b", 1), one).unwrap());
        assert!(matches!(
            r_parallel(&a, &a, Rational::ZERO),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(r_parallel(&a, &a, q(-1, 2)), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn r_parallel_is_not_transitive() {
        let one = Rational::ONE;
        let a = Event::point("a", 0);
        let b = Event::point("b", q(3, 5));
        let c = Event::point("c", q(6, 5));
        assert!(r_parallel(&a, &b, one).unwrap());
        assert!(r_parallel(&b, &c, one).unwrap());
        assert!(!r_parallel(&a, &c, one).unwrap());
    }

    #[test]
    fn coexisting_and_separable() {
        assert!(coexisting(&iv("a", 0, 2), &iv("b", 1, 3)).unwrap());
        assert!(!coexisting(&iv("a", 0, 1), &iv("b", 2, 3)).unwrap());
        assert!(coexisting(&Event::point("a", 1), &Event::point("b", 1)).unwrap());
        assert!(separable_events(&iv("a", 0, 1), &iv("b", 2, 3)).unwrap());
        assert!(!separable_events(&iv("a", 0, 2), &iv("b", 1, 3)).unwrap());
        assert!(separable_events(&Event::point("a", 1), &Event::point("b", 2)).unwrap());
        assert!(matches!(
            coexisting(&Event::named("a"), &Event::point("b", 1)),
            Err(Error::MissingTime(_))
        ));
    }

    #[test]
    fn degenerate_convention_agrees_with_separability_on_points() {
        for x in -3..=3 {
            for y in -3..=3 {
                let (a, b) = (Event::point("a", x), Event::point("b", y));
                assert_eq!(coexisting(&a, &b).unwrap(), x == y);
                assert_eq!(separable_events(&a, &b).unwrap(), !coexisting(&a, &b).unwrap());
            }
        }
    }

    #[test]
    fn action_extent() {
        let a = action_of([Event::point("a", 1), Event::point("b", 3)]);
        assert_eq!(
            (action_begin(&a).unwrap(), action_end(&a).unwrap()),
            (1.into(), 3.into())
        );
        let s = action_of([Event::point("a", 2)]);
        assert_eq!(extent(&s).unwrap(), (2.into(), 2.into()));
        let m = action_of([iv("a", 0, 5), Event::point("b", 2)]);
        assert_eq!(extent(&m).unwrap(), (0.into(), 5.into()));
        assert!(matches!(extent(&action_of([])), Err(Error::UndefinedExtent)));
    }

    #[test]
    fn action_separability_boundary() {
        let a = action_of([Event::point("a", 0), Event::point("b", 2)]);
        let b = action_of([Event::point("c", 2), Event::point("d", 4)]);
        assert!(separable_actions(&a, &b).unwrap());
        assert!(!strictly_separable(&a, &b).unwrap());
        let c = action_of([Event::point("c", 3)]);
        let d = action_of([Event::point("d", 1)]);
        assert!(separable_actions(&d, &c).unwrap() && strictly_separable(&d, &c).unwrap());
        let e = action_of([iv("x", 0, 3)]);
        let f = action_of([iv("y", 2, 5)]);
        assert!(!separable_actions(&e, &f).unwrap() && !strictly_separable(&e, &f).unwrap());
        assert!(matches!(
            separable_actions(&e, &action_of([])),
            Err(Error::UndefinedExtent)
        ));
    }
}
