//! Classic process-algebra operators over EAP: expressions, their trace
//! semantics, and their translation into potential processes.

use std::collections::BTreeSet;
use std::fmt;

use crate::action_algebra::{mixed_seq_actions, seq_delta, translate as shift_by, Pairing};
use crate::error::{Error, Result};
use crate::model::{action_of, CompatConstraint, CompatMode, Event, Process, Relations, Status, TAU};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProcExpr {
    Atom {
        name: String,
        in_state: Option<String>,
        out_state: Option<String>,
    },
    Choice(Box<ProcExpr>, Box<ProcExpr>),
    Seq(Box<ProcExpr>, Box<ProcExpr>),
    Merge(Box<ProcExpr>, Box<ProcExpr>),
    LeftMerge(Box<ProcExpr>, Box<ProcExpr>),
    RightMerge(Box<ProcExpr>, Box<ProcExpr>),
    Comm(Box<ProcExpr>, Box<ProcExpr>),
    Abstract(BTreeSet<String>, Box<ProcExpr>),
}

impl ProcExpr {
    pub fn atom(name: impl Into<String>) -> Self {
        ProcExpr::Atom {
            name: name.into(),
            in_state: None,
            out_state: None,
        }
    }

    pub fn atom_with_states(name: impl Into<String>, input: impl Into<String>, output: impl Into<String>) -> Self {
        ProcExpr::Atom {
            name: name.into(),
            in_state: Some(input.into()),
            out_state: Some(output.into()),
        }
    }

    pub fn choice(l: ProcExpr, r: ProcExpr) -> Self {
        ProcExpr::Choice(Box::new(l), Box::new(r))
    }

    pub fn seq(l: ProcExpr, r: ProcExpr) -> Self {
        ProcExpr::Seq(Box::new(l), Box::new(r))
    }

    pub fn merge(l: ProcExpr, r: ProcExpr) -> Self {
        ProcExpr::Merge(Box::new(l), Box::new(r))
    }

    pub fn left_merge(l: ProcExpr, r: ProcExpr) -> Self {
        ProcExpr::LeftMerge(Box::new(l), Box::new(r))
    }

    pub fn right_merge(l: ProcExpr, r: ProcExpr) -> Self {
        ProcExpr::RightMerge(Box::new(l), Box::new(r))
    }

    pub fn comm(l: ProcExpr, r: ProcExpr) -> Self {
        ProcExpr::Comm(Box::new(l), Box::new(r))
    }

    pub fn hide<S: Into<String>>(names: impl IntoIterator<Item = S>, body: ProcExpr) -> Self {
        ProcExpr::Abstract(names.into_iter().map(Into::into).collect(), Box::new(body))
    }

    /// Atoms have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            ProcExpr::Atom { .. } => 1,
            ProcExpr::Abstract(_, b) => 1 + b.depth(),
            ProcExpr::Choice(l, r)
            | ProcExpr::Seq(l, r)
            | ProcExpr::Merge(l, r)
            | ProcExpr::LeftMerge(l, r)
            | ProcExpr::RightMerge(l, r)
            | ProcExpr::Comm(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |n| {
            out.insert(n);
        });
        out
    }

    fn visit_atoms<'a>(&'a self, f: &mut dyn FnMut(&'a str)) {
        match self {
            ProcExpr::Atom { name, .. } => f(name),
            ProcExpr::Abstract(_, b) => b.visit_atoms(f),
            ProcExpr::Choice(l, r)
            | ProcExpr::Seq(l, r)
            | ProcExpr::Merge(l, r)
            | ProcExpr::LeftMerge(l, r)
            | ProcExpr::RightMerge(l, r)
            | ProcExpr::Comm(l, r) => {
                l.visit_atoms(f);
                r.visit_atoms(f);
            }
        }
    }

    /// Rejects the reserved atom name and empty hide sets.
    pub fn validate(&self) -> Result<()> {
        match self {
            ProcExpr::Atom { name, .. } if name == TAU => Err(Error::ReservedName(TAU.into())),
            ProcExpr::Atom { name, .. } if name.is_empty() => Err(Error::InvalidParameter("atom name is empty".into())),
            ProcExpr::Atom {
                in_state, out_state, ..
            } if in_state.is_some() != out_state.is_some() => {
                Err(Error::InvalidParameter("an atom carries both states or neither".into()))
            }
            ProcExpr::Atom { .. } => Ok(()),
            ProcExpr::Abstract(hide, b) => {
                if hide.is_empty() {
                    return Err(Error::InvalidParameter("abstraction hides no names".into()));
                }
                if hide.contains(TAU) {
                    return Err(Error::ReservedName(TAU.into()));
                }
                b.validate()
            }
            ProcExpr::Choice(l, r)
            | ProcExpr::Seq(l, r)
            | ProcExpr::Merge(l, r)
            | ProcExpr::LeftMerge(l, r)
            | ProcExpr::RightMerge(l, r)
            | ProcExpr::Comm(l, r) => {
                l.validate()?;
                r.validate()
            }
        }
    }
}

impl fmt::Display for ProcExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::serialize_expr(self))
    }
}

/// Completed traces: sequences of visible step names.
pub type TraceSet = BTreeSet<Vec<String>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceConfig {
    pub max_depth: usize,
    pub max_traces: usize,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig {
            max_depth: 12,
            max_traces: 100_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Step {
    name: String,
    input: Option<String>,
    output: Option<String>,
}

type Steps = BTreeSet<Vec<Step>>;

pub fn traces(x: &ProcExpr) -> Result<TraceSet> {
    traces_with(x, TraceConfig::default())
}

pub fn traces_with(x: &ProcExpr, cfg: TraceConfig) -> Result<TraceSet> {
    x.validate()?;
    if x.depth() > cfg.max_depth {
        return Err(Error::capacity(
            format!("expression of depth {}", x.depth()),
            cfg.max_depth,
        ));
    }
    Ok(steps(x, &cfg)?
        .into_iter()
        .map(|t| t.into_iter().map(|s| s.name).collect())
        .collect())
}

fn guard(n: u128, cfg: &TraceConfig) -> Result<()> {
    if n > cfg.max_traces as u128 {
        return Err(Error::capacity(format!("{n} traces"), cfg.max_traces));
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn shuffles<E: Clone>(a: &[E], b: &[E], prefix: &mut Vec<E>, out: &mut Vec<Vec<E>>) {
    match (a.split_first(), b.split_first()) {
        (None, None) => out.push(prefix.clone()),
        (Some(_), None) | (None, Some(_)) => {
            let mut done = prefix.clone();
            done.extend_from_slice(a);
            done.extend_from_slice(b);
            out.push(done);
        }
        (Some((x, rest_a)), Some((y, rest_b))) => {
            prefix.push(x.clone());
            shuffles(rest_a, b, prefix, out);
            prefix.pop();
            prefix.push(y.clone());
            shuffles(a, rest_b, prefix, out);
            prefix.pop();
        }
    }
}

/// Every interleaving of `a` and `b`.
pub fn interleavings<E: Clone>(a: &[E], b: &[E]) -> Vec<Vec<E>> {
    let mut out = Vec::new();
    shuffles(a, b, &mut Vec::new(), &mut out);
    out
}

fn steps(x: &ProcExpr, cfg: &TraceConfig) -> Result<Steps> {
    Ok(match x {
        ProcExpr::Atom {
            name,
            in_state,
            out_state,
        } => [vec![Step {
            name: name.clone(),
            input: in_state.clone(),
            output: out_state.clone(),
        }]]
        .into(),
        ProcExpr::Choice(l, r) => {
            let mut out = steps(l, cfg)?;
            out.extend(steps(r, cfg)?);
            guard(out.len() as u128, cfg)?;
            out
        }
        ProcExpr::Seq(l, r) => {
            let (tl, tr) = (steps(l, cfg)?, steps(r, cfg)?);
            guard(tl.len() as u128 * tr.len() as u128, cfg)?;
            let mut out = Steps::new();
            for a in &tl {
                for b in &tr {
                    out.insert(a.iter().chain(b).cloned().collect());
                }
            }
            out
        }
        ProcExpr::Merge(l, r) | ProcExpr::LeftMerge(l, r) | ProcExpr::RightMerge(l, r) => {
            let (tl, tr) = (steps(l, cfg)?, steps(r, cfg)?);
            let mut total = 0u128;
            for a in &tl {
                for b in &tr {
                    total += binomial(a.len() + b.len(), a.len());
                }
            }
            guard(total, cfg)?;
            let mut out = Steps::new();
            for a in &tl {
                for b in &tr {
                    match x {
                        ProcExpr::Merge(..) => out.extend(interleavings(a, b)),
                        ProcExpr::LeftMerge(..) => out.extend(committed(a, b)),
                        _ => out.extend(committed(b, a)),
                    }
                }
            }
            out
        }
        ProcExpr::Comm(l, r) => {
            let (tl, tr) = (steps(l, cfg)?, steps(r, cfg)?);
            guard(tl.len() as u128 * tr.len() as u128, cfg)?;
            let mut out = Steps::new();
            for a in &tl {
                for b in &tr {
                    out.insert(fuse(a, b)?);
                }
            }
            out
        }
        ProcExpr::Abstract(hide, b) => steps(b, cfg)?
            .into_iter()
            .map(|t| t.into_iter().filter(|s| !hide.contains(&s.name)).collect())
            .collect(),
    })
}

/// Interleavings of `first` and `other` that start with the head of `first`.
fn committed(first: &[Step], other: &[Step]) -> Vec<Vec<Step>> {
    let Some((head, rest)) = first.split_first() else {
        return Vec::new();
    };
    interleavings(rest, other)
        .into_iter()
        .map(|mut t| {
            t.insert(0, head.clone());
            t
        })
        .collect()
}

fn fuse(a: &[Step], b: &[Step]) -> Result<Vec<Step>> {
    let (Some((last, init)), Some((first, tail))) = (a.split_last(), b.split_first()) else {
        return Err(Error::Link("communication needs a step on both sides".into()));
    };
    match (&last.output, &first.input) {
        (Some(o), Some(i)) if o == i => {}
        (o, i) => {
            return Err(Error::Link(format!(
                "{} ends in {o:?} but {} starts in {i:?}",
                last.name, first.name
            )))
        }
    }
    let mut out = init.to_vec();
    out.push(Step {
        name: format!("{};{}", last.name, first.name),
        input: last.input.clone(),
        output: first.output.clone(),
    });
    out.extend_from_slice(tail);
    Ok(out)
}

pub fn equivalent(x: &ProcExpr, y: &ProcExpr) -> Result<bool> {
    Ok(traces(x)? == traces(y)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TranslateConfig {
    pub traces: TraceConfig,
    /// Upper bound on the number of actions of any intermediate process.
    pub max_elements: usize,
}

impl Default for TranslateConfig {
    fn default() -> Self {
        TranslateConfig {
            traces: TraceConfig::default(),
            max_elements: 1024,
        }
    }
}

pub fn translate(x: &ProcExpr) -> Result<Process> {
    translate_with(x, TranslateConfig::default())
}

/// A potential process whose realizations have exactly the traces of `x`.
///
/// Every action holds one point-like event and no two events share a time.
/// Alternatives are kept apart by incompatibility constraints between every
/// pair of elements from different alternatives.
pub fn translate_with(x: &ProcExpr, cfg: TranslateConfig) -> Result<Process> {
    traces_with(x, cfg.traces)?;
    let mut t = Translator {
        next: 0,
        max: cfg.max_elements,
    };
    let built = t.build(x)?;
    if built.branches.is_empty() {
        return Ok(dead_process());
    }
    Ok(built.process)
}

/// A process without realizations: its forced part contradicts itself.
fn dead_process() -> Process {
    let steps = |i: i64| action_of([Event::point(TAU, i).hidden()]);
    let cons = [CompatConstraint::new("d0", "d1", CompatMode::Incompatible)].into();
    Process::form(
        vec![("d0".into(), steps(1)), ("d1".into(), steps(2))],
        Relations::new(),
        cons,
        Status::Emerging(["d0".into(), "d1".into()].into()),
    )
    .expect("well-formed")
}

struct Built {
    process: Process,
    /// The realizations, each as element ids in time order.
    branches: Vec<Vec<String>>,
}

struct Translator {
    next: usize,
    max: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Interleave {
    Any,
    LeftFirst,
    RightFirst,
}

impl Translator {
    fn fresh(&mut self) -> String {
        self.next += 1;
        format!("x{}", self.next - 1)
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.max {
            return Err(Error::capacity(format!("translation with {n} actions"), self.max));
        }
        Ok(())
    }

    fn build(&mut self, x: &ProcExpr) -> Result<Built> {
        match x {
            ProcExpr::Atom {
                name,
                in_state,
                out_state,
            } => {
                let mut e = Event::point(name.clone(), 1);
                e.in_state = in_state.clone();
                e.out_state = out_state.clone();
                let id = self.fresh();
                let process = Process::form(
                    vec![(id.clone(), action_of([e]))],
                    Relations::new(),
                    BTreeSet::new(),
                    Status::Potential,
                )?;
                Ok(Built {
                    process,
                    branches: vec![vec![id]],
                })
            }
            ProcExpr::Choice(l, r) => {
                let (bl, br) = (self.build(l)?, self.build(r)?);
                if bl.branches.is_empty() {
                    return Ok(br);
                }
                if br.branches.is_empty() {
                    return Ok(bl);
                }
                self.check(bl.process.len() + br.process.len())?;
                let shifted = shift_by(&br.process, seq_delta(&bl.process, &br.process, Rational::ONE)?)?;
                let mut process = bl.process.union(&shifted);
                for a in bl.process.ids() {
                    for b in shifted.ids() {
                        process.add_constraint(CompatConstraint::new(a.clone(), b.clone(), CompatMode::Incompatible));
                    }
                }
                let mut branches = bl.branches;
                branches.extend(br.branches);
                Ok(Built { process, branches })
            }
            ProcExpr::Seq(l, r) => {
                let (bl, br) = (self.build(l)?, self.build(r)?);
                if bl.branches.is_empty() || br.branches.is_empty() {
                    return Ok(Built {
                        process: Process::empty(Status::Potential),
                        branches: Vec::new(),
                    });
                }
                self.check(bl.process.len() + br.process.len())?;
                let shifted = shift_by(&br.process, seq_delta(&bl.process, &br.process, Rational::ONE)?)?;
                let mut branches = Vec::new();
                for a in &bl.branches {
                    for b in &br.branches {
                        branches.push(a.iter().chain(b).cloned().collect());
                    }
                }
                Ok(Built {
                    process: bl.process.union(&shifted),
                    branches,
                })
            }
            ProcExpr::Merge(l, r) => self.interleave(l, r, Interleave::Any),
            ProcExpr::LeftMerge(l, r) => self.interleave(l, r, Interleave::LeftFirst),
            ProcExpr::RightMerge(l, r) => self.interleave(l, r, Interleave::RightFirst),
            ProcExpr::Comm(l, r) => {
                let (bl, br) = (self.build(l)?, self.build(r)?);
                let mut seqs = BTreeSet::new();
                for a in &bl.branches {
                    for b in &br.branches {
                        seqs.insert(communicate(&events_of(&bl.process, a), &events_of(&br.process, b))?);
                    }
                }
                self.alternatives(seqs)
            }
            ProcExpr::Abstract(hide, b) => {
                let built = self.build(b)?;
                let process = built.process.map_events(|e| {
                    let mut e = e.clone();
                    if hide.contains(&e.name) {
                        e.observable = false;
                    }
                    Ok(e)
                })?;
                Ok(Built {
                    process,
                    branches: built.branches,
                })
            }
        }
    }

    fn interleave(&mut self, l: &ProcExpr, r: &ProcExpr, mode: Interleave) -> Result<Built> {
        let (bl, br) = (self.build(l)?, self.build(r)?);
        let mut seqs: BTreeSet<Vec<Untimed>> = BTreeSet::new();
        let mut total = 0usize;
        for a in &bl.branches {
            for b in &br.branches {
                let xs: Vec<(bool, Untimed)> = events_of(&bl.process, a).into_iter().map(|e| (true, e)).collect();
                let ys: Vec<(bool, Untimed)> = events_of(&br.process, b).into_iter().map(|e| (false, e)).collect();
                let needs_left = mode == Interleave::LeftFirst;
                if mode != Interleave::Any {
                    let side = if needs_left { &xs } else { &ys };
                    if !side.iter().any(|(_, e)| e.observable) {
                        continue;
                    }
                }
                total += binomial(xs.len() + ys.len(), xs.len()) as usize * (xs.len() + ys.len());
                self.check(total)?;
                for seq in interleavings(&xs, &ys) {
                    if mode != Interleave::Any {
                        let first = seq.iter().find(|(_, e)| e.observable).map(|(from_left, _)| *from_left);
                        if first != Some(needs_left) {
                            continue;
                        }
                    }
                    seqs.insert(seq.into_iter().map(|(_, e)| e).collect());
                }
            }
        }
        self.alternatives(seqs)
    }

    /// One realization per sequence, laid out in consecutive disjoint time
    /// windows and mutually incompatible.
    fn alternatives(&mut self, seqs: BTreeSet<Vec<Untimed>>) -> Result<Built> {
        self.check(seqs.iter().map(Vec::len).sum())?;
        let mut elements = Vec::new();
        let mut branches = Vec::new();
        let mut time = 0i64;
        for seq in seqs {
            let mut ids = Vec::new();
            for u in seq {
                time += 1;
                let id = self.fresh();
                elements.push((id.clone(), action_of([u.at(time)])));
                ids.push(id);
            }
            branches.push(ids);
        }
        let mut cons = BTreeSet::new();
        for (i, a) in branches.iter().enumerate() {
            for b in &branches[i + 1..] {
                for x in a {
                    for y in b {
                        cons.insert(CompatConstraint::new(x.clone(), y.clone(), CompatMode::Incompatible));
                    }
                }
            }
        }
        let process = Process::form(elements, Relations::new(), cons, Status::Potential)?;
        Ok(Built { process, branches })
    }
}

/// An event with its time removed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Untimed {
    name: String,
    observable: bool,
    input: Option<String>,
    output: Option<String>,
}

impl Untimed {
    fn of(e: &Event) -> Self {
        Untimed {
            name: e.name.clone(),
            observable: e.observable,
            input: e.in_state.clone(),
            output: e.out_state.clone(),
        }
    }

    fn at(&self, t: i64) -> Event {
        let mut e = Event::point(self.name.clone(), t);
        e.observable = self.observable;
        e.in_state = self.input.clone();
        e.out_state = self.output.clone();
        e
    }
}

fn events_of(p: &Process, ids: &[String]) -> Vec<Untimed> {
    ids.iter()
        .flat_map(|id| p.get(id).expect("branch ids resolve").all_events())
        .map(Untimed::of)
        .collect()
}

/// Mixed sequential composition of two realizations, linking the last
/// observable event of the first with the first observable event of the second.
fn communicate(xs: &[Untimed], ys: &[Untimed]) -> Result<Vec<Untimed>> {
    let lx = xs.iter().rposition(|e| e.observable);
    let fy = ys.iter().position(|e| e.observable);
    let (Some(lx), Some(fy)) = (lx, fy) else {
        return Err(Error::Link(
            "communication needs an observable event on both sides".into(),
        ));
    };
    let left = action_of(xs.iter().enumerate().map(|(i, u)| u.at(i as i64 + 1)));
    let right = action_of(ys.iter().enumerate().map(|(i, u)| u.at(i as i64 + 1)));
    let pairing = Pairing::new(vec![(format!("e{lx}"), format!("e{fy}"))])?;
    let mut linked: Vec<Event> = mixed_seq_actions(&left, &right, &pairing)?
        .all_events()
        .into_iter()
        .cloned()
        .collect();
    linked.sort_by_key(|e| e.point_time().expect("point times"));
    Ok(linked.iter().map(Untimed::of).collect())
}

type Law = fn(&ProcExpr, &ProcExpr, &ProcExpr) -> (ProcExpr, ProcExpr);

pub const AXIOMS: [(&str, Law); 5] = [
    ("x + y = y + x", |x, y, _| {
        (
            ProcExpr::choice(x.clone(), y.clone()),
            ProcExpr::choice(y.clone(), x.clone()),
        )
    }),
    ("(x + y) + z = x + (y + z)", |x, y, z| {
        (
            ProcExpr::choice(ProcExpr::choice(x.clone(), y.clone()), z.clone()),
            ProcExpr::choice(x.clone(), ProcExpr::choice(y.clone(), z.clone())),
        )
    }),
    ("x + x = x", |x, _, _| {
        (ProcExpr::choice(x.clone(), x.clone()), x.clone())
    }),
    ("(x + y) . z = x . z + y . z", |x, y, z| {
        (
            ProcExpr::seq(ProcExpr::choice(x.clone(), y.clone()), z.clone()),
            ProcExpr::choice(ProcExpr::seq(x.clone(), z.clone()), ProcExpr::seq(y.clone(), z.clone())),
        )
    }),
    ("(x . y) . z = x . (y . z)", |x, y, z| {
        (
            ProcExpr::seq(ProcExpr::seq(x.clone(), y.clone()), z.clone()),
            ProcExpr::seq(x.clone(), ProcExpr::seq(y.clone(), z.clone())),
        )
    }),
];

/// Largest trace-set product accepted for one generated triple.
const TRIPLE_BUDGET: usize = 20_000;

/// Checks the five axioms on `cases` reproducible triples drawn from `seed`.
pub fn check_axioms(seed: u64, cases: usize) -> Result<crate::laws::LawReport> {
    if cases == 0 {
        return Err(Error::InvalidParameter("cases must be positive".into()));
    }
    let mut gen = crate::laws::ExprGen::new(seed, crate::laws::ExprGenConfig::default());
    let mut outcomes: Vec<crate::laws::LawOutcome> = AXIOMS
        .iter()
        .map(|(name, _)| crate::laws::LawOutcome::new(*name))
        .collect();
    let mut resampled = 0;
    let mut done = 0;
    while done < cases {
        let triple = [gen.expr(), gen.expr(), gen.expr()];
        let sizes: Vec<usize> = match triple.iter().map(traces).collect::<Result<Vec<_>>>() {
            Ok(ts) => ts.iter().map(BTreeSet::len).collect(),
            Err(_) => {
                resampled += 1;
                continue;
            }
        };
        if sizes.iter().map(|&s| s.max(1)).product::<usize>() > TRIPLE_BUDGET {
            resampled += 1;
            continue;
        }
        done += 1;
        let [x, y, z] = &triple;
        for (outcome, (_, law)) in outcomes.iter_mut().zip(AXIOMS.iter()) {
            let (lhs, rhs) = law(x, y, z);
            let (tl, tr) = (traces(&lhs), traces(&rhs));
            outcome.record(tl.is_ok() && tl == tr, || {
                format!("x = {x}, y = {y}, z = {z}: {tl:?} vs {tr:?}")
            });
        }
    }
    Ok(crate::laws::LawReport {
        suite: "acp".into(),
        seed,
        cases,
        resampled,
        outcomes,
    })
}
