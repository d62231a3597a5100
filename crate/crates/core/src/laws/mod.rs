//! Seeded generators and the law suites run by the command line.
//!
//! Every generator draws from a ChaCha stream, so a seed fixes the whole run.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::acp::{check_axioms, traces, translate, ProcExpr};
use crate::action_algebra::{
    complement, free_compose, free_parallel, meet, mpar_cross, mpar_pairs, mpar_seq, mpar_seq_cross,
};
use crate::error::{Error, Result};
use crate::model::{
    action_of, classify_action, Action, ActionLabel, Category, CompatConstraint, CompatMode, Document, Event,
    EventKind, Process, Relations, SemanticMap, SpaceGraph, Status, TemporalCoord,
};
use crate::oracles::{oracle_measures, oracle_realization_traces};
use crate::rational::Rational;

mod preservation;

pub use preservation::{equivalence_suite, is_enhanced_subsystem_of, preservation_suite};

/// Outcome of one law over a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawOutcome {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    pub counterexample: Option<String>,
}

impl LawOutcome {
    pub fn new(name: impl Into<String>) -> Self {
        LawOutcome {
            name: name.into(),
            passed: 0,
            failed: 0,
            counterexample: None,
        }
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(witness());
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    /// Generated cases discarded before checking, for example for size.
    pub resampled: usize,
    pub outcomes: Vec<LawOutcome>,
}

impl LawReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.failed == 0)
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {} seed {} cases {} resampled {}",
            self.suite, self.seed, self.cases, self.resampled
        )?;
        for o in &self.outcomes {
            let mark = if o.failed == 0 { "PASS" } else { "FAIL" };
            writeln!(f, "{mark} {} ({}/{})", o.name, o.passed, o.passed + o.failed)?;
            if let Some(c) = &o.counterexample {
                writeln!(f, "  counterexample: {c}")?;
            }
        }
        Ok(())
    }
}

/// Named checks accumulated in insertion order.
#[derive(Default)]
struct Tally {
    outcomes: Vec<LawOutcome>,
}

impl Tally {
    fn check(&mut self, name: &str, ok: bool, witness: impl FnOnce() -> String) {
        let i = match self.outcomes.iter().position(|o| o.name == name) {
            Some(i) => i,
            None => {
                self.outcomes.push(LawOutcome::new(name));
                self.outcomes.len() - 1
            }
        };
        self.outcomes[i].record(ok, witness);
    }

    fn report(self, suite: &str, seed: u64, cases: usize, resampled: usize) -> LawReport {
        LawReport {
            suite: suite.into(),
            seed,
            cases,
            resampled,
            outcomes: self.outcomes,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExprGenConfig {
    pub max_depth: usize,
    pub atoms: Vec<String>,
    /// Give every atom the states `s -> s`, so communication always links.
    pub with_states: bool,
}

impl Default for ExprGenConfig {
    fn default() -> Self {
        ExprGenConfig {
            max_depth: 4,
            atoms: ["a", "b", "c", "d"].map(String::from).to_vec(),
            with_states: true,
        }
    }
}

/// Random expressions over a fixed atom set.
pub struct ExprGen {
    rng: ChaCha8Rng,
    cfg: ExprGenConfig,
}

impl ExprGen {
    pub fn new(seed: u64, cfg: ExprGenConfig) -> Self {
        ExprGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            cfg,
        }
    }

    pub fn expr(&mut self) -> ProcExpr {
        let d = self.rng.gen_range(1..=self.cfg.max_depth);
        self.sized(d)
    }

    fn atom(&mut self) -> ProcExpr {
        let name = self.cfg.atoms.choose(&mut self.rng).expect("atoms").clone();
        if self.cfg.with_states {
            ProcExpr::atom_with_states(name, "s", "s")
        } else {
            ProcExpr::atom(name)
        }
    }

    fn sized(&mut self, depth: usize) -> ProcExpr {
        if depth <= 1 || self.rng.gen_bool(0.2) {
            return self.atom();
        }
        let sub = |g: &mut Self| {
            let d = g.rng.gen_range(1..depth);
            g.sized(d)
        };
        match self.rng.gen_range(0..7) {
            0 => ProcExpr::choice(sub(self), sub(self)),
            1 => ProcExpr::seq(sub(self), sub(self)),
            2 => ProcExpr::merge(sub(self), sub(self)),
            3 => ProcExpr::left_merge(sub(self), sub(self)),
            4 => ProcExpr::right_merge(sub(self), sub(self)),
            5 => ProcExpr::comm(sub(self), sub(self)),
            _ => {
                let k = self.rng.gen_range(1..=2);
                let hide: BTreeSet<String> = self.cfg.atoms.choose_multiple(&mut self.rng, k).cloned().collect();
                let body = self.sized(depth - 1);
                ProcExpr::Abstract(hide, Box::new(body))
            }
        }
    }
}

/// Random actions, processes and documents.
pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A time in `[0, span]` on a half-unit grid.
    pub fn time(&mut self, span: i64) -> Rational {
        Rational::new(self.rng.gen_range(0..=2 * span), 2).expect("non-zero denominator")
    }

    /// An action of up to `max_events` point-like events named from `names`.
    pub fn point_action(&mut self, max_events: usize, names: &[&str], span: i64) -> Action {
        let n = self.rng.gen_range(0..=max_events);
        self.point_action_of(n, names, span)
    }

    pub fn point_action_of(&mut self, n: usize, names: &[&str], span: i64) -> Action {
        let events: Vec<Event> = (0..n)
            .map(|_| {
                let name = *names.choose(&mut self.rng).expect("names");
                Event::point(name, self.time(span))
            })
            .collect();
        action_of(events)
    }

    pub fn nonempty_point_action(&mut self, max_events: usize, names: &[&str], span: i64) -> Action {
        let n = self.rng.gen_range(1..=max_events);
        self.point_action_of(n, names, span)
    }

    /// A process of up to `max_actions` non-empty point-like actions.
    pub fn point_process(&mut self, max_actions: usize, max_events: usize, names: &[&str], span: i64) -> Process {
        let n = self.rng.gen_range(0..=max_actions);
        self.point_process_of(n, max_events, names, span)
    }

    pub fn point_process_of(&mut self, n: usize, max_events: usize, names: &[&str], span: i64) -> Process {
        let actions: Vec<Action> = (0..n)
            .map(|_| self.nonempty_point_action(max_events, names, span))
            .collect();
        crate::model::process_of(actions)
    }

    /// A random subset of `items`.
    pub fn subset<T: Clone + Ord>(&mut self, items: &BTreeSet<T>) -> BTreeSet<T> {
        items.iter().filter(|_| self.rng.gen_bool(0.5)).cloned().collect()
    }

    fn opt<T>(&mut self, p: f64, f: impl FnOnce(&mut Self) -> T) -> Option<T> {
        if self.rng.gen_bool(p) {
            Some(f(self))
        } else {
            None
        }
    }

    fn event(&mut self, nodes: &[String], timed: bool) -> Event {
        let names = ["a", "b", "c", "send", "recv", "x1", "y_2"];
        let mut e = Event::named(*names.choose(&mut self.rng).expect("names"));
        if timed || self.rng.gen_bool(0.8) {
            let t = self.time(6);
            e.tag.time = Some(match self.rng.gen_range(0..4) {
                0 | 1 => TemporalCoord::Point(t),
                2 => TemporalCoord::interval(t, t.checked_add(self.time(3)).expect("small")).expect("ordered"),
                _ => {
                    let mut ts: Vec<Rational> = (0..self.rng.gen_range(1..4)).map(|_| self.time(6)).collect();
                    ts.sort();
                    ts.dedup();
                    TemporalCoord::points(ts).expect("increasing")
                }
            });
        }
        if !nodes.is_empty() {
            e.tag.space = self.opt(0.4, |g| nodes.choose(&mut g.rng).expect("nodes").clone());
        }
        e.kind = *EventKind::ALL.choose(&mut self.rng).expect("kinds");
        e.carrier = self.opt(0.3, |g| format!("m{}", g.rng.gen_range(0..3)));
        if self.rng.gen_bool(0.4) {
            e.in_state = Some(format!("s{}", self.rng.gen_range(0..3)));
            e.out_state = Some(format!("s{}", self.rng.gen_range(0..3)));
        }
        e.observable = self.rng.gen_bool(0.8);
        e.category = self.opt(0.3, |g| {
            *[Category::InSystem, Category::BySystem, Category::ForSystem]
                .choose(&mut g.rng)
                .expect("categories")
        });
        e
    }

    fn relations(&mut self, ids: &[String]) -> Relations {
        let mut rels = Relations::new();
        if ids.is_empty() {
            return rels;
        }
        for label in ["before", "causes"] {
            if self.rng.gen_bool(0.5) {
                let pairs = (0..self.rng.gen_range(0..4))
                    .map(|_| {
                        (
                            ids.choose(&mut self.rng).expect("ids").clone(),
                            ids.choose(&mut self.rng).expect("ids").clone(),
                        )
                    })
                    .collect();
                rels.insert(label.into(), pairs);
            }
        }
        rels
    }

    fn constraints(&mut self, ids: &[String], modes: &[CompatMode]) -> BTreeSet<CompatConstraint> {
        if ids.is_empty() || modes.is_empty() {
            return BTreeSet::new();
        }
        (0..self.rng.gen_range(0..4))
            .map(|_| {
                CompatConstraint::new(
                    ids.choose(&mut self.rng).expect("ids").clone(),
                    ids.choose(&mut self.rng).expect("ids").clone(),
                    *modes.choose(&mut self.rng).expect("modes"),
                )
            })
            .collect()
    }

    /// A status for elements whose time extents are given in id order.
    fn status(&mut self, ids: &[String], extents: &[Option<(Rational, Rational)>]) -> Status {
        match self.rng.gen_range(0..3) {
            0 => Status::Actualized,
            1 => Status::Potential,
            _ => {
                // The actualized part must end before the rest begins.
                let Some(all) = extents.iter().cloned().collect::<Option<Vec<_>>>() else {
                    return Status::Potential;
                };
                let Some(cut) = all.iter().map(|e| e.1).min() else {
                    return Status::Potential;
                };
                let chosen: BTreeSet<String> = ids
                    .iter()
                    .zip(&all)
                    .filter(|(_, (_, hi))| *hi <= cut)
                    .map(|(id, _)| id.clone())
                    .collect();
                let rest_begin = ids
                    .iter()
                    .zip(&all)
                    .filter(|(id, _)| !chosen.contains(*id))
                    .map(|(_, (lo, _))| *lo)
                    .min();
                match rest_begin {
                    Some(b) if b <= cut => Status::Potential,
                    _ => Status::Emerging(chosen),
                }
            }
        }
    }

    fn modes_for(status: &Status) -> &'static [CompatMode] {
        match status {
            Status::Actualized => &[
                CompatMode::Compatible,
                CompatMode::WeaklyCompatible,
                CompatMode::StronglyCompatible,
                CompatMode::WeaklyIncompatible,
            ],
            _ => &CompatMode::ALL,
        }
    }

    /// A well-formed action exercising every event feature.
    pub fn rich_action(&mut self, nodes: &[String]) -> Action {
        let n = self.rng.gen_range(0..6);
        let extra_timed = self.rng.gen_bool(0.5);
        let events: Vec<(String, Event)> = (0..n)
            .map(|i| (format!("e{i}"), self.event(nodes, extra_timed)))
            .collect();
        let action = Action::form(events, Relations::new(), BTreeSet::new(), Status::Actualized)
            .expect("relation-free actions form");
        let ids: Vec<String> = action.ids().cloned().collect();
        let extents: Vec<_> = action
            .elements()
            .values()
            .map(|e| e.time().map(TemporalCoord::extent))
            .collect();
        let status = self.status(&ids, &extents);
        let cons = self.constraints(&ids, Self::modes_for(&status));
        let rels = self.relations(&ids);
        let carriers: Vec<String> = (0..self.rng.gen_range(0..2)).map(|i| format!("m{i}")).collect();
        let events: Vec<(String, Event)> = action.elements().iter().map(|(i, e)| (i.clone(), e.clone())).collect();
        Action::form(events, rels, cons, status)
            .expect("generated actions are well formed")
            .with_shared_carriers(carriers)
    }

    pub fn document(&mut self) -> Document {
        let mut space = SpaceGraph::default();
        let k = self.rng.gen_range(0..4);
        for i in 0..k {
            space.add_node(format!("n{i}"));
        }
        let nodes: Vec<String> = space.nodes.iter().cloned().collect();
        for _ in 0..self.rng.gen_range(0..3) {
            if nodes.len() >= 2 {
                let (a, b) = (
                    nodes.choose(&mut self.rng).expect("nodes").clone(),
                    nodes.choose(&mut self.rng).expect("nodes").clone(),
                );
                space.add_edge(&a, &b).expect("declared nodes");
            }
        }
        let mut semantics = SemanticMap::identity();
        for name in ["a", "send"] {
            if self.rng.gen_bool(0.3) {
                semantics.entries.insert(name.into(), format!("v_{name}"));
            }
        }
        let mut actions = BTreeMap::new();
        for i in 0..self.rng.gen_range(0..4) {
            actions.insert(format!("A{i}"), self.rich_action(&nodes));
        }
        let mut processes = BTreeMap::new();
        for i in 0..self.rng.gen_range(0..3) {
            let members: Vec<(String, Action)> = (0..self.rng.gen_range(0..4))
                .map(|j| (format!("p{j}"), self.rich_action(&nodes)))
                .collect();
            let proc = Process::form(members, Relations::new(), BTreeSet::new(), Status::Actualized)
                .expect("relation-free processes form");
            let ids: Vec<String> = proc.ids().cloned().collect();
            let extents: Vec<_> = proc.elements().values().map(|a| crate::model::extent(a).ok()).collect();
            let status = self.status(&ids, &extents);
            let cons = self.constraints(&ids, Self::modes_for(&status));
            let rels = self.relations(&ids);
            let members: Vec<(String, Action)> = proc.elements().iter().map(|(i, a)| (i.clone(), a.clone())).collect();
            let proc = Process::form(members, rels, cons, status).expect("generated processes are well formed");
            processes.insert(format!("P{i}"), proc);
        }
        Document {
            space_graph: space,
            semantics,
            actions,
            processes,
        }
    }
}

pub const NAMES_A: [&str; 6] = ["a", "b", "c", "d", "e", "f"];
pub const NAMES_B: [&str; 6] = ["p", "q", "r", "s", "t", "u"];

fn universe_action(n: usize, with_relation: bool) -> Action {
    let events: Vec<(String, Event)> = (0..n)
        .map(|i| (format!("u{i}"), Event::point(format!("u{i}"), (i % 3) as i64)))
        .collect();
    let mut rels = Relations::new();
    if with_relation {
        rels.insert(
            "next".into(),
            (0..n.saturating_sub(1))
                .map(|i| (format!("u{i}"), format!("u{}", i + 1)))
                .collect(),
        );
    }
    Action::form(events, rels, BTreeSet::new(), Status::Actualized).expect("well formed")
}

fn universe_process(n: usize, with_relation: bool) -> Process {
    let actions: Vec<(String, Action)> = (0..n)
        .map(|i| {
            (
                format!("a{i}"),
                action_of([Event::point(format!("x{i}"), i as i64), Event::point("y", 0)]),
            )
        })
        .collect();
    let mut rels = Relations::new();
    if with_relation {
        rels.insert(
            "then".into(),
            (0..n.saturating_sub(1))
                .map(|i| (format!("a{i}"), format!("a{}", i + 1)))
                .collect(),
        );
    }
    Process::form(actions, rels, BTreeSet::new(), Status::Actualized).expect("well formed")
}

fn subsystems<T: crate::model::Element>(u: &crate::model::System<T>) -> Vec<crate::model::System<T>> {
    let ids: Vec<String> = u.ids().cloned().collect();
    (0..1usize << ids.len())
        .map(|m| {
            let keep: BTreeSet<String> = (0..ids.len())
                .filter(|i| m >> i & 1 == 1)
                .map(|i| ids[i].clone())
                .collect();
            u.restrict_unchecked(&keep, &u.relation_labels())
        })
        .collect()
}

fn lattice_pair<T: crate::model::Element>(
    t: &mut Tally,
    level: &str,
    a: &crate::model::System<T>,
    b: &crate::model::System<T>,
) {
    let w = || format!("{a:?} / {b:?}");
    t.check(&format!("{level}: union commutes"), a.union(b) == b.union(a), w);
    t.check(&format!("{level}: meet commutes"), a.meet(b) == b.meet(a), w);
    t.check(&format!("{level}: meet absorbs union"), a.meet(&a.union(b)) == *a, w);
    t.check(&format!("{level}: union absorbs meet"), a.union(&a.meet(b)) == *a, w);
    t.check(&format!("{level}: union idempotent"), a.union(a) == *a, w);
    t.check(&format!("{level}: meet idempotent"), a.meet(a) == *a, w);
}

fn lattice_triple<T: crate::model::Element>(
    t: &mut Tally,
    level: &str,
    a: &crate::model::System<T>,
    b: &crate::model::System<T>,
    c: &crate::model::System<T>,
) {
    let w = || format!("{a:?} / {b:?} / {c:?}");
    t.check(
        &format!("{level}: union associative"),
        a.union(b).union(c) == a.union(&b.union(c)),
        w,
    );
    t.check(
        &format!("{level}: meet associative"),
        a.meet(b).meet(c) == a.meet(&b.meet(c)),
        w,
    );
    t.check(
        &format!("{level}: meet distributes over union"),
        a.meet(&b.union(c)) == a.meet(b).union(&a.meet(c)),
        w,
    );
    t.check(
        &format!("{level}: union distributes over meet"),
        a.union(&b.meet(c)) == a.union(b).meet(&a.union(c)),
        w,
    );
}

fn boolean_pair<T: crate::model::Element>(
    t: &mut Tally,
    level: &str,
    u: &crate::model::System<T>,
    a: &crate::model::System<T>,
    b: &crate::model::System<T>,
) -> Result<()> {
    let w = || format!("{a:?} / {b:?}");
    let (ca, cb) = (a.complement_in(u)?, b.complement_in(u)?);
    let bottom = crate::model::System::<T>::empty(u.status().clone());
    t.check(
        &format!("{level}: union with complement is the universe"),
        a.union(&ca) == *u,
        w,
    );
    t.check(
        &format!("{level}: meet with complement is empty"),
        a.meet(&ca) == bottom,
        w,
    );
    t.check(
        &format!("{level}: complement is an involution"),
        ca.complement_in(u)? == *a,
        w,
    );
    t.check(
        &format!("{level}: union with bottom and meet with top"),
        a.union(&bottom) == *a && a.meet(u) == *a,
        w,
    );
    t.check(
        &format!("{level}: complement of union is meet of complements"),
        a.union(b).complement_in(u)? == ca.meet(&cb),
        w,
    );
    t.check(
        &format!("{level}: complement of meet is union of complements"),
        a.meet(b).complement_in(u)? == ca.union(&cb),
        w,
    );
    Ok(())
}

/// Lattice and Boolean-algebra laws for actions and processes.
///
/// Exhaustive over all subsystems of five-element universes (pairs and
/// triples), then `cases` sampled pairs and `cases / 10` sampled triples over
/// ten-element universes.
pub fn lattice_suite(seed: u64, cases: usize) -> Result<LawReport> {
    let mut t = Tally::default();
    fn run<T: crate::model::Element>(
        t: &mut Tally,
        level: &str,
        related: &crate::model::System<T>,
        plain: &crate::model::System<T>,
    ) -> Result<()> {
        let subs = subsystems(related);
        for a in &subs {
            for b in &subs {
                lattice_pair(t, level, a, b);
            }
        }
        for a in &subs {
            for b in &subs {
                for c in &subs {
                    lattice_triple(t, level, a, b, c);
                }
            }
        }
        let subs = subsystems(plain);
        for a in &subs {
            for b in &subs {
                boolean_pair(t, level, plain, a, b)?;
            }
        }
        Ok(())
    }
    run(&mut t, "actions", &universe_action(5, true), &universe_action(5, false))?;
    run(
        &mut t,
        "processes",
        &universe_process(5, true),
        &universe_process(5, false),
    )?;

    let mut g = Gen::new(seed);
    let big = universe_action(10, true);
    let bigp = universe_process(10, true);
    let ids: BTreeSet<String> = big.ids().cloned().collect();
    let pids: BTreeSet<String> = bigp.ids().cloned().collect();
    let labels = big.relation_labels();
    let plabels = bigp.relation_labels();
    let sample = |g: &mut Gen| big.restrict_unchecked(&g.subset(&ids), &labels);
    for i in 0..cases {
        let (a, b) = (sample(&mut g), sample(&mut g));
        lattice_pair(&mut t, "sampled actions", &a, &b);
        if i % 10 == 0 {
            lattice_triple(&mut t, "sampled actions", &a, &b, &sample(&mut g));
            let (p, q, r) = (
                bigp.restrict_unchecked(&g.subset(&pids), &plabels),
                bigp.restrict_unchecked(&g.subset(&pids), &plabels),
                bigp.restrict_unchecked(&g.subset(&pids), &plabels),
            );
            lattice_pair(&mut t, "sampled processes", &p, &q);
            lattice_triple(&mut t, "sampled processes", &p, &q, &r);
        }
    }
    Ok(t.report("lattice", seed, cases, 0))
}

/// Closed-form measures against the literal oracle, plus the measure
/// inequalities, over `cases` random point-like actions of at most 12 events.
pub fn measures_suite(seed: u64, cases: usize) -> Result<LawReport> {
    let mut g = Gen::new(seed);
    let mut t = Tally::default();
    for _ in 0..cases {
        let a = g.point_action(12, &NAMES_A, 4);
        let b = g.point_action(12, &NAMES_B, 4);
        let w = || format!("{a:?} / {b:?}");
        let o = oracle_measures(&a, &b)?;
        let (pairs, seq) = (mpar_pairs(&a)?, mpar_seq(&a)?);
        let (cross, seq_cross) = (mpar_cross(&a, &b)?, mpar_seq_cross(&a, &b)?);
        t.check("parallel pairs match oracle", pairs == o.pairs, w);
        t.check("cross parallel pairs match oracle", cross == o.cross, w);
        t.check("measure of sequentiality matches oracle", seq == o.seq, w);
        t.check(
            "cross measure of sequentiality matches oracle",
            seq_cross == o.seq_cross,
            w,
        );
        t.check("maximal subaction choice does not matter", o.well_defined(), w);
        t.check("sequential measure bounded by pair count", seq <= pairs, w);
        let sequential = classify_action(&a).contains(&ActionLabel::Sequential);
        t.check(
            "zero measures exactly for sequential actions",
            (seq == 0 && pairs == 0) == sequential,
            w,
        );
        let small_groups = {
            let mut m: BTreeMap<Rational, usize> = BTreeMap::new();
            for e in a.all_events() {
                *m.entry(e.point_time()?).or_insert(0) += 1;
            }
            m.values().all(|&c| c <= 2)
        };
        t.check(
            "measures agree exactly when parallel groups are pairs",
            (seq == pairs) == small_groups,
            w,
        );
        t.check("cross sequential measure bounded by cross pairs", seq_cross <= cross, w);
        let b_seq = classify_action(&b).contains(&ActionLabel::Sequential);
        t.check(
            "both sequential implies cross measures agree",
            !(sequential && b_seq) || seq_cross == cross,
            w,
        );
        let ids_a: BTreeSet<String> = a.ids().cloned().collect();
        let ids_b: BTreeSet<String> = b.ids().cloned().collect();
        let d = a.restrict_unchecked(&g.subset(&ids_a), &BTreeSet::new());
        let c = b.restrict_unchecked(&g.subset(&ids_b), &BTreeSet::new());
        t.check(
            "cross measures monotone under subactions",
            mpar_cross(&d, &c)? <= cross && mpar_seq_cross(&d, &c)? <= seq_cross,
            w,
        );
    }
    Ok(t.report("measures", seed, cases, 0))
}

/// The action-level Boolean laws on random relation-free actions over a
/// universe of up to 12 events.
pub fn random_boolean_suite(seed: u64, cases: usize) -> Result<LawReport> {
    let mut g = Gen::new(seed);
    let mut t = Tally::default();
    for _ in 0..cases {
        let n = g.rng().gen_range(0..=12);
        let events: Vec<Event> = (0..n).map(|i| Event::point(format!("u{i}"), g.time(3))).collect();
        let u = action_of(events);
        let ids: BTreeSet<String> = u.ids().cloned().collect();
        let a = u.restrict_unchecked(&g.subset(&ids), &BTreeSet::new());
        let b = u.restrict_unchecked(&g.subset(&ids), &BTreeSet::new());
        let ca = complement(&a, &u)?;
        let w = || format!("{a:?} / {b:?}");
        t.check("union with complement is the universe", free_compose(&a, &ca) == u, w);
        t.check("meet with complement is empty", meet(&a, &ca).is_empty(), w);
        t.check(
            "complement of union is meet of complements",
            complement(&free_compose(&a, &b), &u)? == meet(&ca, &complement(&b, &u)?),
            w,
        );
    }
    Ok(t.report("boolean", seed, cases, 0))
}

/// Free parallel composition on `cases` non-empty pairs at each level, with
/// operands over disjoint alphabets so no shifted event coincides with one
/// already present.
pub fn parallel_growth_suite(seed: u64, cases: usize) -> Result<LawReport> {
    fn check<T: crate::model::Element>(
        t: &mut Tally,
        level: &str,
        a: &crate::model::System<T>,
        b: &crate::model::System<T>,
    ) -> Result<()> {
        let pi = free_parallel(a, b)?;
        let w = || format!("{a:?} / {b:?}");
        let (pp, ps) = (mpar_pairs(&pi)?, mpar_seq(&pi)?);
        t.check(
            &format!("{level}: parallel pairs exceed both operands"),
            pp > mpar_pairs(a)?.max(mpar_pairs(b)?),
            w,
        );
        t.check(
            &format!("{level}: sequential measure is at least the sum"),
            ps >= mpar_seq(a)? + mpar_seq(b)?,
            w,
        );
        Ok(())
    }
    let mut g = Gen::new(seed);
    let mut t = Tally::default();
    for _ in 0..cases {
        let a = g.nonempty_point_action(8, &NAMES_A, 4);
        let b = g.nonempty_point_action(8, &NAMES_B, 4);
        check(&mut t, "actions", &a, &b)?;
        let n = g.rng().gen_range(1..=3);
        let p = g.point_process_of(n, 4, &NAMES_A, 4);
        let n = g.rng().gen_range(1..=3);
        let q = g.point_process_of(n, 4, &NAMES_B, 4);
        check(&mut t, "processes", &p, &q)?;
    }
    Ok(t.report("parallel", seed, cases, 0))
}

/// Traces read off the realizations of `translate(x)` by the exhaustive
/// oracle, against the trace semantics of `x`, on `cases` random expressions.
///
/// Expressions whose trace set, translation or oracle run exceeds a
/// capacity bound are redrawn and counted as resampled.
pub fn translation_suite(seed: u64, cases: usize) -> Result<LawReport> {
    let mut gen = ExprGen::new(seed, ExprGenConfig::default());
    let mut t = Tally::default();
    let mut resampled = 0;
    let mut done = 0;
    while done < cases {
        let x = gen.expr();
        let expected = traces(&x);
        let got = translate(&x).and_then(|p| oracle_realization_traces(&p));
        if [&expected, &got]
            .iter()
            .any(|r| r.as_ref().is_err_and(Error::is_capacity))
        {
            resampled += 1;
            continue;
        }
        done += 1;
        match (expected, got) {
            (Ok(e), Ok(g)) => t.check(
                "oracle traces of the translation equal the trace semantics",
                e == g,
                || format!("{x}: expected {e:?}, got {g:?}"),
            ),
            (e, g) => t.check(
                "translation is undefined exactly where the trace semantics is",
                e.is_err() && g.is_err(),
                || format!("{x}: traces {e:?}, translation {g:?}"),
            ),
        }
    }
    Ok(t.report("translation", seed, cases, resampled))
}

/// Suites runnable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Acp,
    Lattice,
    Measures,
    Parallel,
    Boolean,
    Preservation,
    Equivalence,
    Translation,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Acp,
        Suite::Lattice,
        Suite::Measures,
        Suite::Parallel,
        Suite::Boolean,
        Suite::Preservation,
        Suite::Equivalence,
        Suite::Translation,
    ];

    pub fn run(self, seed: u64, cases: usize) -> Result<LawReport> {
        match self {
            Suite::Acp => check_axioms(seed, cases),
            Suite::Lattice => lattice_suite(seed, cases),
            Suite::Measures => measures_suite(seed, cases),
            Suite::Parallel => parallel_growth_suite(seed, cases),
            Suite::Boolean => random_boolean_suite(seed, cases),
            Suite::Preservation => preservation_suite(seed, cases),
            Suite::Equivalence => equivalence_suite(seed, cases),
            Suite::Translation => translation_suite(seed, cases),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_reproducible() {
        let mut g1 = ExprGen::new(3, ExprGenConfig::default());
        let mut g2 = ExprGen::new(3, ExprGenConfig::default());
        for _ in 0..20 {
            let (x, y) = (g1.expr(), g2.expr());
            assert_eq!(x, y);
            assert!(x.depth() <= 4);
            assert!(x.validate().is_ok());
        }
        assert_eq!(Gen::new(9).document(), Gen::new(9).document());
    }

    #[test]
    fn generated_documents_validate() {
        let mut g = Gen::new(1);
        for _ in 0..50 {
            g.document().validate().unwrap();
        }
    }

    #[test]
    fn small_suites_pass() {
        let r = measures_suite(5, 60).unwrap();
        assert!(r.all_passed(), "{r}");
        let r = random_boolean_suite(5, 60).unwrap();
        assert!(r.all_passed(), "{r}");
        let r = parallel_growth_suite(5, 60).unwrap();
        assert!(r.all_passed(), "{r}");
        let r = translation_suite(5, 20).unwrap();
        assert!(r.all_passed(), "{r}");
    }
}
