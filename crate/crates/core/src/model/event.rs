use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// The reserved name of the silent step.
pub const TAU: &str = "tau";

/// When an event happens: a point, a closed interval, or a tuple of points.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum TemporalCoord {
    Point(Rational),
    Interval(Rational, Rational),
    Points(Vec<Rational>),
}

impl TemporalCoord {
    pub fn interval(begin: Rational, end: Rational) -> Result<Self> {
        if begin > end {
            return Err(Error::InvalidParameter(format!(
                "interval begin {begin} exceeds end {end}"
            )));
        }
        Ok(TemporalCoord::Interval(begin, end))
    }

    pub fn points(ts: Vec<Rational>) -> Result<Self> {
        if ts.is_empty() {
            return Err(Error::InvalidParameter("empty point tuple".into()));
        }
        Ok(TemporalCoord::Points(ts))
    }

    /// Checks the shape invariants (interval order, non-empty tuples).
    pub fn validate(&self) -> Result<()> {
        match self {
            TemporalCoord::Point(_) => Ok(()),
            TemporalCoord::Interval(b, e) => TemporalCoord::interval(*b, *e).map(drop),
            TemporalCoord::Points(ts) if ts.is_empty() => Err(Error::InvalidParameter("empty point tuple".into())),
            TemporalCoord::Points(_) => Ok(()),
        }
    }

    /// Every temporal value carried by the coordinate.
    pub fn values(&self) -> Vec<Rational> {
        match self {
            TemporalCoord::Point(t) => vec![*t],
            TemporalCoord::Interval(b, e) => vec![*b, *e],
            TemporalCoord::Points(ts) => ts.clone(),
        }
    }

    /// Smallest and largest temporal value. A point is the degenerate interval `[t, t]`.
    pub fn extent(&self) -> (Rational, Rational) {
        let vs = self.values();
        let lo = *vs.iter().min().expect("temporal coordinates are non-empty");
        let hi = *vs.iter().max().expect("temporal coordinates are non-empty");
        (lo, hi)
    }

    pub fn as_point(&self) -> Option<Rational> {
        match self {
            TemporalCoord::Point(t) => Some(*t),
            _ => None,
        }
    }

    /// Applies `f` to every temporal value.
    pub fn map(&self, mut f: impl FnMut(Rational) -> Result<Rational>) -> Result<Self> {
        Ok(match self {
            TemporalCoord::Point(t) => TemporalCoord::Point(f(*t)?),
            TemporalCoord::Interval(b, e) => TemporalCoord::Interval(f(*b)?, f(*e)?),
            TemporalCoord::Points(ts) => TemporalCoord::Points(ts.iter().map(|t| f(*t)).collect::<Result<_>>()?),
        })
    }
}

impl fmt::Display for TemporalCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TemporalCoord::Point(t) => write!(f, "{t}"),
            TemporalCoord::Interval(b, e) => write!(f, "[{b},{e}]"),
            TemporalCoord::Points(ts) => {
                write!(f, "(")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Where and when an event happens. Either coordinate may be absent.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Tag {
    pub time: Option<TemporalCoord>,
    pub space: Option<String>,
}

impl Tag {
    pub fn at(t: Rational) -> Self {
        Tag {
            time: Some(TemporalCoord::Point(t)),
            space: None,
        }
    }

    /// Time projection.
    pub fn time(&self) -> Option<&TemporalCoord> {
        self.time.as_ref()
    }

    /// Space projection.
    pub fn space(&self) -> Option<&str> {
        self.space.as_deref()
    }
}

/// The finite graph that carries space coordinates.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SpaceGraph {
    pub nodes: BTreeSet<String>,
    /// Unordered pairs, stored with the smaller id first.
    pub edges: BTreeSet<(String, String)>,
}

impl SpaceGraph {
    pub fn add_node(&mut self, n: impl Into<String>) {
        self.nodes.insert(n.into());
    }

    pub fn add_edge(&mut self, a: &str, b: &str) -> Result<()> {
        for n in [a, b] {
            if !self.nodes.contains(n) {
                return Err(Error::Resolution(format!("edge endpoint {n:?} is not a node")));
            }
        }
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.edges.insert((a.to_string(), b.to_string()));
        Ok(())
    }

    pub fn adjacent(&self, a: &str, b: &str) -> bool {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.edges.contains(&(a.to_string(), b.to_string()))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub enum EventKind {
    #[default]
    Generic,
    Emission,
    Reception,
    Reading,
    Writing,
}

impl EventKind {
    pub const ALL: [EventKind; 5] = [
        EventKind::Generic,
        EventKind::Emission,
        EventKind::Reception,
        EventKind::Reading,
        EventKind::Writing,
    ];

    pub fn is_communication(self) -> bool {
        self != EventKind::Generic
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Generic => "generic",
            EventKind::Emission => "emission",
            EventKind::Reception => "reception",
            EventKind::Reading => "reading",
            EventKind::Writing => "writing",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        EventKind::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

/// Which side of the system an event belongs to.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Category {
    InSystem,
    BySystem,
    ForSystem,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::InSystem => "in-system",
            Category::BySystem => "by-system",
            Category::ForSystem => "for-system",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Category::InSystem, Category::BySystem, Category::ForSystem]
            .into_iter()
            .find(|c| c.as_str() == s)
    }
}

/// The part of an event that determines its identity.
pub type EventKey = (String, Tag, EventKind, Option<String>);

/// A single occurrence: what happened (its name) and where/when (its tag).
///
/// Two events are the same element of an action when their [`Event::key`]s
/// agree. The remaining fields are annotations.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Event {
    pub name: String,
    pub tag: Tag,
    pub kind: EventKind,
    /// Information carrier read from or written to.
    pub carrier: Option<String>,
    pub in_state: Option<String>,
    pub out_state: Option<String>,
    pub observable: bool,
    pub category: Option<Category>,
}

impl Event {
    /// An observable generic event with no tag.
    pub fn named(name: impl Into<String>) -> Self {
        Event {
            name: name.into(),
            tag: Tag::default(),
            kind: EventKind::Generic,
            carrier: None,
            in_state: None,
            out_state: None,
            observable: true,
            category: None,
        }
    }

    /// A point-like observable generic event.
    pub fn point(name: impl Into<String>, t: impl Into<Rational>) -> Self {
        Event {
            tag: Tag::at(t.into()),
            ..Event::named(name)
        }
    }

    /// An extended event over `[begin, end]`.
    pub fn extended(name: impl Into<String>, begin: Rational, end: Rational) -> Result<Self> {
        Ok(Event {
            tag: Tag {
                time: Some(TemporalCoord::interval(begin, end)?),
                space: None,
            },
            ..Event::named(name)
        })
    }

    pub fn with_kind(mut self, kind: EventKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn with_space(mut self, node: impl Into<String>) -> Self {
        self.tag.space = Some(node.into());
        self
    }

    pub fn with_carrier(mut self, carrier: impl Into<String>) -> Self {
        self.carrier = Some(carrier.into());
        self
    }

    pub fn with_states(mut self, input: impl Into<String>, output: impl Into<String>) -> Self {
        self.in_state = Some(input.into());
        self.out_state = Some(output.into());
        self
    }

    pub fn hidden(mut self) -> Self {
        self.observable = false;
        self
    }

    pub fn key(&self) -> EventKey {
        (self.name.clone(), self.tag.clone(), self.kind, self.carrier.clone())
    }

    pub fn time(&self) -> Option<&TemporalCoord> {
        self.tag.time.as_ref()
    }

    /// The time of a point-like event.
    pub fn point_time(&self) -> Result<Rational> {
        match &self.tag.time {
            Some(TemporalCoord::Point(t)) => Ok(*t),
            Some(other) => Err(Error::UnsupportedShape(format!(
                "event {} has non-point time {other}",
                self.name
            ))),
            None => Err(Error::MissingTime(self.name.clone())),
        }
    }

    pub fn is_point_like(&self) -> bool {
        matches!(self.tag.time, Some(TemporalCoord::Point(_)))
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.tag.time {
            Some(t) => write!(f, "{}@{}", self.name, t),
            None => write!(f, "{}", self.name),
        }
    }
}

/// Maps names to values. Names without an entry denote themselves.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SemanticMap {
    pub entries: BTreeMap<String, String>,
}

impl SemanticMap {
    pub fn identity() -> Self {
        SemanticMap::default()
    }

    pub fn value<'a>(&'a self, name: &'a str) -> &'a str {
        self.entries.get(name).map(String::as_str).unwrap_or(name)
    }
}
