//! Preservation properties: which classes survive subsystems, shifts,
//! renamings, projections and the free temporal compositions.
//!
//! Each property draws instances until its premise holds, so every counted
//! case exercises the conclusion.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Gen, LawReport, Tally};
use crate::action_algebra::{
    free_interleave, free_seq, mpar_cross, mpar_seq_cross, project_tags, project_values, rename_action, shift_action,
    ActionShift,
};
use crate::error::Result;
use crate::event_algebra::{
    m_compose, rename_event, shift_event, shifted_m_compose, NameCompositionRule, RenamingMap, TagShift,
};
use crate::model::{
    classify_action, classify_process, complete_subaction, enhanced_subprocess, is_subsystem_of, parallel, subaction,
    subprocess, Action, ActionLabel, Event, EventKind, Process, ProcessLabel, Relations, Status, System, Tag,
    TemporalCoord,
};
use crate::process_algebra::{project_p, transform_p, Projection, Transform};
use crate::rational::Rational;

/// How a generated action's events are drawn.
#[derive(Clone, Copy, Debug)]
struct Style {
    /// 0 generic only, 1 any kind, 2 communication kinds, 3 emissions and receptions.
    kinds: u8,
    distinct_names: bool,
    spaces: bool,
    intervals: bool,
}

/// Draws distinct names on request.
#[derive(Default)]
struct Names {
    next: usize,
}

impl Names {
    fn fresh(&mut self) -> String {
        self.next += 1;
        format!("v{}", self.next)
    }
}

impl Gen {
    fn style(&mut self) -> Style {
        Style {
            kinds: self.rng.gen_range(0..4),
            distinct_names: self.rng.gen_bool(0.5),
            spaces: self.rng.gen_bool(0.3),
            intervals: self.rng.gen_bool(0.15),
        }
    }

    /// `n` distinct times on the half grid of `[lo, lo + span]`, in random order.
    fn distinct_times(&mut self, n: usize, lo: i64, span: i64) -> Vec<Rational> {
        let mut grid: Vec<i64> = (0..=2 * span.max(n as i64)).collect();
        grid.shuffle(&mut self.rng);
        grid.truncate(n);
        grid.into_iter()
            .map(|h| Rational::new(2 * lo + h, 2).expect("non-zero denominator"))
            .collect()
    }

    fn styled_event(&mut self, t: Rational, style: Style, names: &mut Names) -> Event {
        let name = if style.distinct_names {
            names.fresh()
        } else {
            ["a", "b", "c"].choose(&mut self.rng).expect("names").to_string()
        };
        let mut e = Event::point(name, t);
        if style.intervals && self.rng.gen_bool(0.5) {
            let len = Rational::new(self.rng.gen_range(1..4), 2).expect("non-zero denominator");
            e.tag.time = Some(TemporalCoord::Interval(t, t.checked_add(len).expect("small")));
        }
        if style.spaces {
            e.tag.space = Some(format!("n{}", self.rng.gen_range(0..3)));
        }
        e.kind = match style.kinds {
            0 => EventKind::Generic,
            1 => *EventKind::ALL.choose(&mut self.rng).expect("kinds"),
            2 => EventKind::ALL[self.rng.gen_range(1..5)],
            _ => EventKind::ALL[self.rng.gen_range(1..3)],
        };
        e
    }

    fn random_relations(&mut self, ids: &[String], labels: &[&str]) -> Relations {
        let mut rels = Relations::new();
        if ids.is_empty() {
            return rels;
        }
        for label in labels {
            if self.rng.gen_bool(0.6) {
                let pairs = (0..self.rng.gen_range(1..4))
                    .map(|_| {
                        (
                            ids.choose(&mut self.rng).expect("ids").clone(),
                            ids.choose(&mut self.rng).expect("ids").clone(),
                        )
                    })
                    .collect();
                rels.insert(label.to_string(), pairs);
            }
        }
        rels
    }

    fn styled_action(&mut self, times: Vec<Rational>, style: Style, names: &mut Names) -> Action {
        let events: Vec<(String, Event)> = times
            .into_iter()
            .enumerate()
            .map(|(i, t)| (format!("e{i}"), self.styled_event(t, style, names)))
            .collect();
        let probe = Action::form(events, Relations::new(), BTreeSet::new(), Status::Actualized)
            .expect("relation-free actions form");
        let ids: Vec<String> = probe.ids().cloned().collect();
        let rels = self.random_relations(&ids, &["before", "causes"]);
        let events = probe.elements().iter().map(|(i, e)| (i.clone(), e.clone())).collect();
        Action::form(events, rels, BTreeSet::new(), Status::Actualized).expect("relations over known ids")
    }

    /// An actualized action of up to six events; about half are sequential.
    fn varied_action(&mut self) -> Action {
        let style = self.style();
        self.varied_action_styled(style, &mut Names::default())
    }

    fn varied_action_styled(&mut self, style: Style, names: &mut Names) -> Action {
        let n = self.rng.gen_range(0..=6);
        let times = if self.rng.gen_bool(0.5) {
            self.distinct_times(n, 0, 6)
        } else {
            (0..n).map(|_| self.time(2)).collect()
        };
        self.styled_action(times, style, names)
    }

    /// An actualized process of up to four non-empty actions. Layouts favour
    /// separated actions and globally distinct times.
    fn varied_process(&mut self) -> Process {
        let style = self.style();
        let mut names = Names::default();
        let k = self.rng.gen_range(0..=4);
        let actions: Vec<Action> = match self.rng.gen_range(0..3) {
            0 => (0..k)
                .map(|_| {
                    let n = self.rng.gen_range(1..=4);
                    let ts = (0..n).map(|_| self.time(4)).collect();
                    self.styled_action(ts, style, &mut names)
                })
                .collect(),
            1 => (0..k)
                .map(|i| {
                    let n = self.rng.gen_range(1..=4);
                    let ts = self.distinct_times(n, 20 * i as i64, 6);
                    self.styled_action(ts, style, &mut names)
                })
                .collect(),
            _ => {
                let sizes: Vec<usize> = (0..k).map(|_| self.rng.gen_range(1..=4)).collect();
                let mut pool = self.distinct_times(sizes.iter().sum(), 0, 12).into_iter();
                sizes
                    .into_iter()
                    .map(|n| {
                        let ts = pool.by_ref().take(n).collect();
                        self.styled_action(ts, style, &mut names)
                    })
                    .collect()
            }
        };
        let probe = crate::model::process_of(actions);
        let ids: Vec<String> = probe.ids().cloned().collect();
        let rels = self.random_relations(&ids, &["then"]);
        let members = probe.elements().iter().map(|(i, a)| (i.clone(), a.clone())).collect();
        Process::form(members, rels, BTreeSet::new(), Status::Actualized).expect("relations over known ids")
    }

    fn id_subset<T: crate::model::Element>(&mut self, s: &System<T>) -> BTreeSet<String> {
        let ids: BTreeSet<String> = s.ids().cloned().collect();
        self.subset(&ids)
    }

    fn label_subset<T: crate::model::Element>(&mut self, s: &System<T>) -> BTreeSet<String> {
        self.subset(&s.relation_labels())
    }

    /// Extra relations over `ids` under a fresh label or an existing one.
    fn extra_relations(&mut self, ids: &BTreeSet<String>) -> Relations {
        let ids: Vec<String> = ids.iter().cloned().collect();
        self.random_relations(&ids, &["then", "extra"])
    }

    fn parallel_points(&mut self, k: usize, spaces: bool) -> Vec<Event> {
        let t = self.time(5);
        (0..k)
            .map(|_| {
                let mut e = Event::point(
                    ["a", "b", "c", "d"].choose(&mut self.rng).expect("names").to_string(),
                    t,
                );
                if spaces {
                    e.tag.space = Some(format!("n{}", self.rng.gen_range(0..3)));
                }
                e
            })
            .collect()
    }

    /// Events of one shape: all points or all intervals.
    fn same_shape_events(&mut self, k: usize) -> Vec<Event> {
        let intervals = self.rng.gen_bool(0.5);
        (0..k)
            .map(|_| {
                let b = self.time(2);
                if intervals {
                    let len = Rational::new(self.rng.gen_range(0..3), 2).expect("non-zero denominator");
                    Event::extended("x", b, b.checked_add(len).expect("small")).expect("ordered")
                } else {
                    Event::point("x", b)
                }
            })
            .collect()
    }

    fn rename_map(&mut self, values: &BTreeSet<String>, injective: bool) -> RenamingMap {
        let vals: Vec<&String> = values.iter().collect();
        if injective {
            let mut images: Vec<String> = (0..vals.len()).map(|i| format!("w{i}")).collect();
            images.shuffle(&mut self.rng);
            RenamingMap::injective(vals.iter().map(|v| v.to_string()).zip(images).collect()).expect("distinct images")
        } else {
            let pool = ["p", "q", "r"];
            RenamingMap::new(
                vals.iter()
                    .map(|v| (v.to_string(), pool.choose(&mut self.rng).expect("pool").to_string()))
                    .collect(),
            )
        }
    }
}

fn names_of<T: crate::model::Element>(s: &System<T>) -> BTreeSet<String> {
    s.all_events().iter().map(|e| e.name.clone()).collect()
}

fn tags_of<T: crate::model::Element>(s: &System<T>) -> BTreeSet<Tag> {
    s.all_events().iter().map(|e| e.tag.clone()).collect()
}

fn al(a: &Action, l: ActionLabel) -> bool {
    classify_action(a).contains(&l)
}

fn pl(p: &Process, l: ProcessLabel) -> bool {
    classify_process(p).contains(&l)
}

/// `sub` keeps elements of `sup` and at least every relation `sup` induces on them.
pub fn is_enhanced_subsystem_of<T: crate::model::Element>(sub: &System<T>, sup: &System<T>) -> bool {
    if !sub.elements().iter().all(|(id, el)| sup.get(id) == Some(el)) {
        return false;
    }
    sup.relations().iter().all(|(label, pairs)| {
        let theirs = sub.relations().get(label);
        pairs
            .iter()
            .filter(|(a, b)| sub.get(a).is_some() && sub.get(b).is_some())
            .all(|p| theirs.is_some_and(|t| t.contains(p)))
    })
}

/// One checked instance, or `None` when the drawn instance misses the premise.
type Instance = Result<Option<(bool, String)>>;

fn case(ok: bool, witness: impl FnOnce() -> String) -> Instance {
    Ok(Some((ok, if ok { String::new() } else { witness() })))
}

type Property = (&'static str, fn(&mut Gen) -> Instance);

/// Every implication premise `p` and conclusion `q` over a list of labels.
fn labels_kept(pairs: &[(bool, bool)]) -> Option<bool> {
    if pairs.iter().any(|(p, _)| *p) {
        Some(pairs.iter().all(|(p, q)| !p || *q))
    } else {
        None
    }
}

fn some_case(v: Option<bool>, witness: impl FnOnce() -> String) -> Instance {
    match v {
        Some(ok) => case(ok, witness),
        None => Ok(None),
    }
}

const PROPERTIES: &[Property] = &[
    ("parallelism is an equivalence relation", |g| {
        let es = g.same_shape_events(3);
        let (a, b, c) = (&es[0], &es[1], &es[2]);
        let ok = parallel(a, a)?
            && parallel(a, b)? == parallel(b, a)?
            && (!(parallel(a, b)? && parallel(b, c)?) || parallel(a, c)?);
        case(ok, || format!("{a} {b} {c}"))
    }),
    ("sequential actions are coordinated", |g| {
        let a = g.varied_action();
        if !al(&a, ActionLabel::Sequential) {
            return Ok(None);
        }
        case(al(&a, ActionLabel::Coordinated), || format!("{a:?}"))
    }),
    ("subactions of finite actions are finite", |g| {
        let a = g.varied_action();
        let (ids, labels) = (g.id_subset(&a), g.label_subset(&a));
        let b = subaction(&a, &ids, &labels)?;
        case(al(&b, ActionLabel::Finite), || format!("{a:?}"))
    }),
    ("subactions of actualized actions are actualized", |g| {
        let a = g.varied_action();
        let (ids, labels) = (g.id_subset(&a), g.label_subset(&a));
        let b = subaction(&a, &ids, &labels)?;
        case(*b.status() == Status::Actualized, || format!("{a:?}"))
    }),
    (
        "subactions of signals and pure explicit communication actions keep the class",
        |g| {
            let a = g.varied_action();
            let (ids, labels) = (g.id_subset(&a), g.label_subset(&a));
            let b = subaction(&a, &ids, &labels)?;
            let mut pairs = vec![(al(&a, ActionLabel::Signal), al(&b, ActionLabel::Signal))];
            if !b.is_empty() {
                pairs.push((
                    al(&a, ActionLabel::PureExplicitCommunication),
                    al(&b, ActionLabel::PureExplicitCommunication),
                ));
            }
            some_case(labels_kept(&pairs), || format!("{a:?} -> {b:?}"))
        },
    ),
    ("complete subactions keep coordination and absence of repetition", |g| {
        let a = g.varied_action();
        let ids = g.id_subset(&a);
        let b = complete_subaction(&a, &ids)?;
        some_case(
            labels_kept(&[
                (al(&a, ActionLabel::Coordinated), al(&b, ActionLabel::Coordinated)),
                (
                    al(&a, ActionLabel::WithoutRepetition),
                    al(&b, ActionLabel::WithoutRepetition),
                ),
            ]),
            || format!("{a:?} -> {b:?}"),
        )
    }),
    ("subactions of subactions are subactions", |g| {
        let a = g.varied_action();
        let (i1, l1) = (g.id_subset(&a), g.label_subset(&a));
        let b = subaction(&a, &i1, &l1)?;
        let (i2, l2) = (g.id_subset(&b), g.label_subset(&b));
        let c = subaction(&b, &i2, &l2)?;
        let complete = complete_subaction(&complete_subaction(&a, &i1)?, &i2)? == complete_subaction(&a, &i2)?;
        case(is_subsystem_of(&c, &a) && complete, || {
            format!("{a:?} / {i1:?} / {i2:?}")
        })
    }),
    ("parallelism measures are monotone under subactions", |g| {
        let a = g.point_action(8, &super::NAMES_A, 3);
        let b = g.point_action(8, &super::NAMES_B, 3);
        let d = complete_subaction(&a, &g.id_subset(&a))?;
        let c = complete_subaction(&b, &g.id_subset(&b))?;
        case(
            mpar_cross(&d, &c)? <= mpar_cross(&a, &b)? && mpar_seq_cross(&d, &c)? <= mpar_seq_cross(&a, &b)?,
            || format!("{a:?} / {b:?} / {d:?} / {c:?}"),
        )
    }),
    ("subprocesses of subprocesses are subprocesses", |g| {
        let p = g.varied_process();
        let (i1, l1) = (g.id_subset(&p), g.label_subset(&p));
        let q = subprocess(&p, &i1, &l1)?;
        let (i2, l2) = (g.id_subset(&q), g.label_subset(&q));
        let r = subprocess(&q, &i2, &l2)?;
        case(is_subsystem_of(&r, &p), || format!("{p:?} / {i1:?} / {i2:?}"))
    }),
    (
        "subprocesses of pure communication or finite processes keep the class",
        |g| {
            let p = g.varied_process();
            let (ids, labels) = (g.id_subset(&p), g.label_subset(&p));
            let q = subprocess(&p, &ids, &labels)?;
            some_case(
                labels_kept(&[
                    (
                        pl(&p, ProcessLabel::PureCommunication),
                        pl(&q, ProcessLabel::PureCommunication),
                    ),
                    (pl(&p, ProcessLabel::Finite), pl(&q, ProcessLabel::Finite)),
                ]),
                || format!("{p:?} -> {q:?}"),
            )
        },
    ),
    (
        "enhanced subprocesses of enhanced subprocesses are enhanced subprocesses",
        |g| {
            let p = g.varied_process();
            let i1 = g.id_subset(&p);
            let x1 = g.extra_relations(&i1);
            let q = enhanced_subprocess(&p, &i1, &p.relation_labels(), &x1)?;
            let i2 = g.id_subset(&q);
            let x2 = g.extra_relations(&i2);
            let r = enhanced_subprocess(&q, &i2, &q.relation_labels(), &x2)?;
            case(
                is_enhanced_subsystem_of(&q, &p) && is_enhanced_subsystem_of(&r, &p),
                || format!("{p:?} / {i1:?} / {i2:?}"),
            )
        },
    ),
    (
        "enhanced subprocesses of pure communication or finite processes keep the class",
        |g| {
            let p = g.varied_process();
            let ids = g.id_subset(&p);
            let extra = g.extra_relations(&ids);
            let q = enhanced_subprocess(&p, &ids, &p.relation_labels(), &extra)?;
            some_case(
                labels_kept(&[
                    (
                        pl(&p, ProcessLabel::PureCommunication),
                        pl(&q, ProcessLabel::PureCommunication),
                    ),
                    (pl(&p, ProcessLabel::Finite), pl(&q, ProcessLabel::Finite)),
                ]),
                || format!("{p:?} -> {q:?}"),
            )
        },
    ),
    (
        "subprocesses of action-sequential or strictly sequential processes keep the class",
        |g| {
            let p = g.varied_process();
            let (ids, labels) = (g.id_subset(&p), g.label_subset(&p));
            let q = subprocess(&p, &ids, &labels)?;
            some_case(
                labels_kept(&[
                    (
                        pl(&p, ProcessLabel::ActionSequential),
                        pl(&q, ProcessLabel::ActionSequential),
                    ),
                    (
                        pl(&p, ProcessLabel::StrictlySequential),
                        pl(&q, ProcessLabel::StrictlySequential),
                    ),
                ]),
                || format!("{p:?} -> {q:?}"),
            )
        },
    ),
    ("subprocesses of interleaving processes are interleaving", |g| {
        let p = g.varied_process();
        if !pl(&p, ProcessLabel::Interleaving) {
            return Ok(None);
        }
        let (ids, labels) = (g.id_subset(&p), g.label_subset(&p));
        let q = subprocess(&p, &ids, &labels)?;
        case(pl(&q, ProcessLabel::Interleaving), || format!("{p:?} -> {q:?}"))
    }),
    ("point-like interleaving processes are strictly sequential", |g| {
        let p = g.varied_process();
        if !pl(&p, ProcessLabel::Interleaving) || !p.all_events().iter().all(|e| e.is_point_like()) {
            return Ok(None);
        }
        case(pl(&p, ProcessLabel::StrictlySequential), || format!("{p:?}"))
    }),
    (
        "m-composition of parallel events is parallel to its operands and to parallel events",
        |g| {
            let spaces = g.rng.gen_bool(0.3);
            let es = g.parallel_points(4, spaces);
            let rule = [
                NameCompositionRule::Concat("+".into()),
                NameCompositionRule::Left,
                NameCompositionRule::Right,
            ]
            .choose(&mut g.rng)
            .expect("rules")
            .clone();
            let m12 = m_compose(&es[0], &es[1], &rule)?;
            let m34 = m_compose(&es[2], &es[3], &rule)?;
            let ok = parallel(&m12, &es[0])?
                && parallel(&m12, &es[1])?
                && parallel(&m12, &m34)?
                && parallel(&m12, &es[2])?
                && parallel(&m12, &es[3])?;
            case(ok, || format!("{es:?}"))
        },
    ),
    ("shifts keep parallel events parallel", |g| {
        let embodied = g.rng.gen_bool(0.5);
        let es = g.parallel_points(2, false);
        let (mut e1, mut e2) = (es[0].clone(), es[1].clone());
        let sft = if embodied {
            // Translations act on time only, so nodes may differ.
            e1.tag.space = Some("n0".into());
            e2.tag.space = Some("n1".into());
            TagShift::Translate(g.time(4))
        } else {
            TagShift::Table([(e1.tag.clone(), Tag::at(g.time(9)))].into())
        };
        let (s1, s2) = (shift_event(&e1, &sft)?, shift_event(&e2, &sft)?);
        case(parallel(&s1, &s2)?, || format!("{e1} {e2} {sft:?}"))
    }),
    ("shifted m-compositions onto parallel events are parallel", |g| {
        let es = g.parallel_points(2, false);
        let (e2, e4) = (&es[0], &es[1]);
        let (e1, e3) = (Event::point("x", g.time(5)), Event::point("y", g.time(5)));
        let rule = NameCompositionRule::Concat("*".into());
        let sft = |from: &Event, to: &Event| -> Result<TagShift> {
            Ok(TagShift::Translate(to.point_time()?.checked_sub(from.point_time()?)?))
        };
        let m12 = shifted_m_compose(&e1, e2, &rule, &sft(&e1, e2)?)?;
        let m34 = shifted_m_compose(&e3, e4, &rule, &sft(&e3, e4)?)?;
        case(parallel(&m12, &m34)?, || format!("{e1} {e2} {e3} {e4}"))
    }),
    ("renaming keeps parallel events parallel", |g| {
        let spaces = g.rng.gen_bool(0.3);
        let es = g.parallel_points(2, spaces);
        let values: BTreeSet<String> = es.iter().map(|e| e.name.clone()).collect();
        let rn = g.rename_map(&values, false);
        let (r1, r2) = (rename_event(&es[0], &rn)?, rename_event(&es[1], &rn)?);
        case(parallel(&r1, &r2)?, || format!("{es:?}"))
    }),
    ("any shift of an action without repetition is without repetition", |g| {
        let a = g.varied_action();
        if !al(&a, ActionLabel::WithoutRepetition) {
            return Ok(None);
        }
        let table: BTreeMap<String, TagShift> =
            a.ids().map(|id| (id.clone(), TagShift::Translate(g.time(3)))).collect();
        let b = shift_action(&a, &ActionShift::PerEvent(table))?;
        case(al(&b, ActionLabel::WithoutRepetition), || format!("{a:?} -> {b:?}"))
    }),
    ("uniform translations keep coordinated and sequential actions", |g| {
        let a = g.varied_action();
        let b = shift_action(&a, &ActionShift::Uniform(TagShift::Translate(g.time(4))))?;
        some_case(
            labels_kept(&[
                (al(&a, ActionLabel::Coordinated), al(&b, ActionLabel::Coordinated)),
                (al(&a, ActionLabel::Sequential), al(&b, ActionLabel::Sequential)),
            ]),
            || format!("{a:?} -> {b:?}"),
        )
    }),
    ("any renaming of a sequential action is sequential", |g| {
        let a = g.varied_action();
        if !al(&a, ActionLabel::Sequential) {
            return Ok(None);
        }
        let rn = g.rename_map(&names_of(&a), false);
        let b = rename_action(&a, &rn)?;
        case(al(&b, ActionLabel::Sequential), || format!("{a:?} -> {b:?}"))
    }),
    (
        "injective renaming keeps coordinated actions and actions without repetition",
        |g| {
            let a = g.varied_action();
            let rn = g.rename_map(&names_of(&a), true);
            let b = rename_action(&a, &rn)?;
            some_case(
                labels_kept(&[
                    (al(&a, ActionLabel::Coordinated), al(&b, ActionLabel::Coordinated)),
                    (
                        al(&a, ActionLabel::WithoutRepetition),
                        al(&b, ActionLabel::WithoutRepetition),
                    ),
                ]),
                || format!("{a:?} -> {b:?}"),
            )
        },
    ),
    ("free sequential composition of sequential actions is sequential", |g| {
        let (a, b) = (g.varied_action(), g.varied_action());
        if !al(&a, ActionLabel::Sequential) || !al(&b, ActionLabel::Sequential) {
            return Ok(None);
        }
        let c = free_seq(&a, &b, Rational::ONE)?;
        case(al(&c, ActionLabel::Sequential), || format!("{a:?} / {b:?}"))
    }),
    ("free interleaving of sequential actions is sequential", |g| {
        let (a, b) = (g.varied_action(), g.varied_action());
        if !al(&a, ActionLabel::Sequential) || !al(&b, ActionLabel::Sequential) {
            return Ok(None);
        }
        if a.is_empty() || b.is_empty() {
            return Ok(None);
        }
        let c = free_interleave(&a, &b)?;
        case(al(&c, ActionLabel::Sequential), || format!("{a:?} / {b:?}"))
    }),
    ("projections of actions are subactions", |g| {
        let a = g.varied_action();
        let w = g.subset(&names_of(&a));
        let k = g.subset(&tags_of(&a));
        let (pv, pt) = (project_values(&a, &w), project_tags(&a, &k));
        case(is_subsystem_of(&pv, &a) && is_subsystem_of(&pt, &a), || {
            format!("{a:?}")
        })
    }),
    (
        "projections keep coordinated, repetition-free and sequential actions",
        |g| {
            let a = g.varied_action();
            let b = if g.rng.gen_bool(0.5) {
                project_values(&a, &g.subset(&names_of(&a)))
            } else {
                project_tags(&a, &g.subset(&tags_of(&a)))
            };
            some_case(
                labels_kept(&[
                    (al(&a, ActionLabel::Coordinated), al(&b, ActionLabel::Coordinated)),
                    (
                        al(&a, ActionLabel::WithoutRepetition),
                        al(&b, ActionLabel::WithoutRepetition),
                    ),
                    (al(&a, ActionLabel::Sequential), al(&b, ActionLabel::Sequential)),
                ]),
                || format!("{a:?} -> {b:?}"),
            )
        },
    ),
    ("any shift of a process without repetition is without repetition", |g| {
        let p = g.varied_process();
        if !pl(&p, ProcessLabel::WithoutRepetition) {
            return Ok(None);
        }
        let q = p.map_elements(|_, a| {
            let table = a.ids().map(|id| (id.clone(), TagShift::Translate(g.time(3)))).collect();
            shift_action(a, &ActionShift::PerEvent(table))
        })?;
        case(pl(&q, ProcessLabel::WithoutRepetition), || format!("{p:?} -> {q:?}"))
    }),
    ("uniform translations keep coordinated and sequential processes", |g| {
        let p = g.varied_process();
        let q = transform_p(&p, &Transform::Shift(TagShift::Translate(g.time(4))))?;
        some_case(
            labels_kept(&[
                (pl(&p, ProcessLabel::Coordinated), pl(&q, ProcessLabel::Coordinated)),
                (pl(&p, ProcessLabel::Sequential), pl(&q, ProcessLabel::Sequential)),
            ]),
            || format!("{p:?} -> {q:?}"),
        )
    }),
    ("any renaming of a sequential process is sequential", |g| {
        let p = g.varied_process();
        if !pl(&p, ProcessLabel::Sequential) {
            return Ok(None);
        }
        let rn = g.rename_map(&names_of(&p), false);
        let q = transform_p(&p, &Transform::Rename(rn))?;
        case(pl(&q, ProcessLabel::Sequential), || format!("{p:?} -> {q:?}"))
    }),
    (
        "injective renaming keeps coordinated processes and processes without repetition",
        |g| {
            let p = g.varied_process();
            let rn = g.rename_map(&names_of(&p), true);
            let q = transform_p(&p, &Transform::Rename(rn))?;
            some_case(
                labels_kept(&[
                    (pl(&p, ProcessLabel::Coordinated), pl(&q, ProcessLabel::Coordinated)),
                    (
                        pl(&p, ProcessLabel::WithoutRepetition),
                        pl(&q, ProcessLabel::WithoutRepetition),
                    ),
                ]),
                || format!("{p:?} -> {q:?}"),
            )
        },
    ),
    (
        "free sequential composition of sequential processes is sequential",
        |g| {
            let (p, q) = (g.varied_process(), g.varied_process());
            if !pl(&p, ProcessLabel::Sequential) || !pl(&q, ProcessLabel::Sequential) {
                return Ok(None);
            }
            let r = free_seq(&p, &q, Rational::ONE)?;
            case(pl(&r, ProcessLabel::Sequential), || format!("{p:?} / {q:?}"))
        },
    ),
    ("free interleaving of sequential processes is sequential", |g| {
        let (p, q) = (g.varied_process(), g.varied_process());
        if !pl(&p, ProcessLabel::Sequential) || !pl(&q, ProcessLabel::Sequential) {
            return Ok(None);
        }
        if p.is_empty() || q.is_empty() {
            return Ok(None);
        }
        let r = free_interleave(&p, &q)?;
        case(pl(&r, ProcessLabel::Sequential), || format!("{p:?} / {q:?}"))
    }),
    (
        "projections of processes are subprocesses with projected actions",
        |g| {
            let p = g.varied_process();
            let w = g.subset(&names_of(&p));
            let q = project_p(&p, &Projection::Values(w.clone()));
            let ok = q.elements().iter().all(|(id, a)| {
                p.get(id)
                    .is_some_and(|orig| is_subsystem_of(a, orig) && *a == project_values(orig, &w))
            }) && q.relations().iter().all(|(l, pairs)| {
                pairs
                    .iter()
                    .all(|pair| p.relations().get(l).is_some_and(|ps| ps.contains(pair)))
            });
            case(ok, || format!("{p:?} / {w:?}"))
        },
    ),
    (
        "projections keep coordinated, repetition-free and sequential processes",
        |g| {
            let p = g.varied_process();
            let proj = if g.rng.gen_bool(0.5) {
                Projection::Values(g.subset(&names_of(&p)))
            } else {
                Projection::Tags(g.subset(&tags_of(&p)))
            };
            let q = project_p(&p, &proj);
            some_case(
                labels_kept(&[
                    (pl(&p, ProcessLabel::Coordinated), pl(&q, ProcessLabel::Coordinated)),
                    (
                        pl(&p, ProcessLabel::WithoutRepetition),
                        pl(&q, ProcessLabel::WithoutRepetition),
                    ),
                    (pl(&p, ProcessLabel::Sequential), pl(&q, ProcessLabel::Sequential)),
                ]),
                || format!("{p:?} -> {q:?}"),
            )
        },
    ),
];

/// Draws at most this many instances per counted case before giving up.
const ATTEMPTS_PER_CASE: usize = 50;

/// Runs every preservation property until `cases` instances meet its premise.
///
/// A property that cannot reach `cases` instances within the attempt budget
/// records one failure naming the shortfall.
pub fn preservation_suite(seed: u64, cases: usize) -> Result<LawReport> {
    let mut g = Gen::new(seed);
    let mut t = Tally::default();
    let mut resampled = 0;
    for (name, prop) in PROPERTIES {
        let mut counted = 0;
        let mut attempts = 0;
        while counted < cases && attempts < cases * ATTEMPTS_PER_CASE {
            attempts += 1;
            match prop(&mut g)? {
                Some((ok, witness)) => {
                    counted += 1;
                    t.check(name, ok, || witness);
                }
                None => resampled += 1,
            }
        }
        if counted < cases {
            t.check(name, false, || {
                format!("only {counted} of {cases} instances met the premise")
            });
        }
    }
    Ok(t.report("preservation", seed, cases, resampled))
}

/// Strict parallelism as an equivalence relation over generated triples.
pub fn equivalence_suite(seed: u64, cases: usize) -> Result<LawReport> {
    let mut g = Gen::new(seed);
    let mut t = Tally::default();
    for _ in 0..cases {
        let es = g.same_shape_events(3);
        let (a, b, c) = (&es[0], &es[1], &es[2]);
        let w = || format!("{a} {b} {c}");
        t.check("parallelism is reflexive", parallel(a, a)?, w);
        t.check("parallelism is symmetric", parallel(a, b)? == parallel(b, a)?, w);
        t.check(
            "parallelism is transitive",
            !(parallel(a, b)? && parallel(b, c)?) || parallel(a, c)?,
            w,
        );
    }
    Ok(t.report("equivalence", seed, cases, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{action_of, r_parallel};

    #[test]
    fn small_preservation_run_passes() {
        let r = preservation_suite(2, 40).unwrap();
        assert!(r.all_passed(), "{r}");
        assert_eq!(r.outcomes.len(), PROPERTIES.len());
        assert!(r.outcomes.iter().all(|o| o.passed >= 40));
    }

    #[test]
    fn equivalence_run_passes() {
        assert!(equivalence_suite(4, 300).unwrap().all_passed());
    }

    #[test]
    fn r_parallelism_is_not_transitive() {
        let r = Rational::ONE;
        let e = |t: Rational| Event::point("x", t);
        let (a, b, c) = (
            e(Rational::ZERO),
            e(Rational::new(3, 5).unwrap()),
            e(Rational::new(6, 5).unwrap()),
        );
        assert!(r_parallel(&a, &b, r).unwrap() && r_parallel(&b, &c, r).unwrap());
        assert!(!r_parallel(&a, &c, r).unwrap());
    }

    #[test]
    fn subactions_can_lose_explicit_communication() {
        let a = action_of([
            Event::point("s", 1).with_kind(EventKind::Emission),
            Event::point("g", 2),
        ]);
        assert!(al(&a, ActionLabel::ExplicitCommunication));
        let b = complete_subaction(&a, &["e1".to_string()].into()).unwrap();
        assert!(!al(&b, ActionLabel::ExplicitCommunication));
    }

    #[test]
    fn non_injective_uniform_shift_can_break_sequentiality() {
        let a = action_of([Event::point("a", 1), Event::point("b", 2)]);
        let image = Tag::at(5.into());
        let sft = TagShift::Table([(Tag::at(1.into()), image.clone()), (Tag::at(2.into()), image)].into());
        let b = shift_action(&a, &ActionShift::Uniform(sft)).unwrap();
        assert!(al(&a, ActionLabel::Sequential) && !al(&b, ActionLabel::Sequential));
    }

    #[test]
    fn enhanced_check_requires_induced_relations() {
        let p = crate::model::process_of([action_of([Event::point("a", 1)]), action_of([Event::point("b", 2)])]);
        let mut rels = Relations::new();
        rels.insert("then".into(), [("a0".to_string(), "a1".to_string())].into());
        let members = p.elements().iter().map(|(i, a)| (i.clone(), a.clone())).collect();
        let related = Process::form(members, rels, BTreeSet::new(), Status::Actualized).unwrap();
        assert!(is_enhanced_subsystem_of(&p, &p));
        assert!(!is_enhanced_subsystem_of(&p, &related));
        assert!(is_enhanced_subsystem_of(&related, &p));
    }
}
