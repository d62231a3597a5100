//! Brute-force reference computations.
//!
//! Each oracle follows a definition literally and shares no code with the
//! closed forms or search procedures it checks. They are exponential by
//! design and refuse inputs above their bounds.

use std::collections::BTreeSet;

use crate::acp::TraceSet;
use crate::error::{Error, Result};
use crate::model::{parallel, Action, CompatMode, Event, Process, Status};

/// Largest action accepted by the subset-enumerating oracles.
pub const SUBSET_BOUND: usize = 16;
/// Largest action accepted by the measure oracle.
pub const MEASURE_BOUND: usize = 12;
/// Largest exclusion-only process accepted by the realization oracle.
pub const CLIQUE_BOUND: usize = 4096;

fn events(a: &Action) -> Vec<&Event> {
    a.elements().values().collect()
}

fn is_sequential(evs: &[&Event]) -> Result<bool> {
    for (i, e) in evs.iter().enumerate() {
        if !e.is_point_like() {
            return Ok(false);
        }
        for f in &evs[i + 1..] {
            if parallel(e, f)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn pick<'a>(evs: &[&'a Event], mask: u32) -> Vec<&'a Event> {
    (0..evs.len()).filter(|i| mask >> i & 1 == 1).map(|i| evs[i]).collect()
}

fn sequential_masks(evs: &[&Event], bound: usize) -> Result<Vec<u32>> {
    if evs.len() > bound {
        return Err(Error::capacity(format!("oracle over {} events", evs.len()), bound));
    }
    let mut out = Vec::new();
    for mask in 0..(1u32 << evs.len()) {
        if is_sequential(&pick(evs, mask))? {
            out.push(mask);
        }
    }
    Ok(out)
}

/// Length of the longest sequential subaction, by enumerating every subset.
pub fn oracle_max_seq_subaction(a: &Action) -> Result<usize> {
    let evs = events(a);
    Ok(sequential_masks(&evs, SUBSET_BOUND)?
        .into_iter()
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0))
}

/// Sequential subactions not contained in a larger sequential subaction.
fn maximal_sequential(evs: &[&Event]) -> Result<Vec<u32>> {
    let seq = sequential_masks(evs, MEASURE_BOUND)?;
    let set: BTreeSet<u32> = seq.iter().copied().collect();
    Ok(seq
        .iter()
        .copied()
        .filter(|&m| (0..evs.len()).all(|i| m >> i & 1 == 1 || !set.contains(&(m | 1 << i))))
        .collect())
}

fn parallel_pairs_within(evs: &[&Event]) -> Result<u64> {
    let mut n = 0;
    for (i, e) in evs.iter().enumerate() {
        for f in &evs[i + 1..] {
            if parallel(e, f)? {
                n += 1;
            }
        }
    }
    Ok(n)
}

fn parallel_pairs_across(xs: &[&Event], ys: &[&Event]) -> Result<u64> {
    let mut n = 0;
    for e in xs {
        for f in ys {
            if parallel(e, f)? {
                n += 1;
            }
        }
    }
    Ok(n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleMeasures {
    /// Parallel pairs inside the first action.
    pub pairs: u64,
    /// Parallel pairs across the two actions.
    pub cross: u64,
    /// First action's size minus its longest sequential subaction.
    pub seq: u64,
    /// Cross parallel pairs between maximal sequential subactions; taken from
    /// the first pair enumerated.
    pub seq_cross: u64,
    /// Every count observed over all pairs of maximal sequential subactions.
    pub seq_cross_counts: BTreeSet<u64>,
}

impl OracleMeasures {
    /// Whether the cross count is independent of which maximal sequential
    /// subactions are chosen.
    pub fn well_defined(&self) -> bool {
        self.seq_cross_counts.len() <= 1
    }
}

/// Every measure by literal counting and exhaustive subaction enumeration.
pub fn oracle_measures(a: &Action, b: &Action) -> Result<OracleMeasures> {
    let (ea, eb) = (events(a), events(b));
    let (ma, mb) = (maximal_sequential(&ea)?, maximal_sequential(&eb)?);
    let longest = ma.iter().map(|m| m.count_ones()).max().unwrap_or(0) as u64;
    let mut counts = Vec::new();
    for &da in &ma {
        for &db in &mb {
            counts.push(parallel_pairs_across(&pick(&ea, da), &pick(&eb, db))?);
        }
    }
    Ok(OracleMeasures {
        pairs: parallel_pairs_within(&ea)?,
        cross: parallel_pairs_across(&ea, &eb)?,
        seq: ea.len() as u64 - longest,
        seq_cross: counts.first().copied().unwrap_or(0),
        seq_cross_counts: counts.into_iter().collect(),
    })
}

/// Observable traces of every realization of `p`.
///
/// Up to [`SUBSET_BOUND`] elements every subset is tested against the
/// constraints and the inclusion-maximal ones are kept. Larger processes are
/// accepted when they carry only exclusions; their realizations are the
/// maximal independent sets of the exclusion graph that contain the forced part.
pub fn oracle_realization_traces(p: &Process) -> Result<TraceSet> {
    let ids: Vec<&String> = p.ids().collect();
    let n = ids.len();
    let at = |id: &String| ids.iter().position(|x| *x == id).expect("constraint ids resolve");
    let mut implications = Vec::new();
    let mut exclusions = Vec::new();
    for c in p.constraints() {
        match c.mode {
            CompatMode::Compatible | CompatMode::StronglyCompatible => implications.push((at(&c.from), at(&c.to))),
            CompatMode::Incompatible | CompatMode::StronglyIncompatible => exclusions.push((at(&c.from), at(&c.to))),
            CompatMode::WeaklyCompatible | CompatMode::WeaklyIncompatible => {}
        }
    }
    let forced: Vec<usize> = match p.status() {
        Status::Actualized => (0..n).collect(),
        Status::Potential => Vec::new(),
        Status::Emerging(part) => part.iter().map(at).collect(),
    };
    let sets: Vec<Vec<usize>> = if n <= SUBSET_BOUND {
        exhaustive(n, &implications, &exclusions, &forced)
    } else if implications.is_empty() && n <= CLIQUE_BOUND {
        independent_sets(n, &exclusions, &forced)
    } else {
        return Err(Error::capacity(
            format!("realization oracle over {n} elements"),
            SUBSET_BOUND,
        ));
    };
    sets.iter()
        .map(|set| {
            let mut seen = Vec::new();
            for &i in set {
                for e in p.elements()[ids[i]].elements().values() {
                    if e.observable {
                        seen.push((e.point_time()?, e.name.clone()));
                    }
                }
            }
            seen.sort();
            if seen.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::AmbiguousTrace("oracle realization".into()));
            }
            Ok(seen
                .into_iter()
                .map(|(_, n)| n)
                .filter(|n| n != crate::model::TAU)
                .collect())
        })
        .collect()
}

fn exhaustive(n: usize, imp: &[(usize, usize)], exc: &[(usize, usize)], forced: &[usize]) -> Vec<Vec<usize>> {
    let size = 1usize << n;
    let has = |m: usize, i: usize| m >> i & 1 == 1;
    let ok: Vec<bool> = (0..size)
        .map(|m| {
            forced.iter().all(|&i| has(m, i))
                && imp.iter().all(|&(a, b)| !has(m, a) || has(m, b))
                && exc.iter().all(|&(a, b)| !(has(m, a) && has(m, b)))
        })
        .collect();
    // above[m]: some consistent strict superset of m exists.
    let mut above = vec![false; size];
    for m in (0..size).rev() {
        above[m] = (0..n).any(|i| !has(m, i) && (ok[m | 1 << i] || above[m | 1 << i]));
    }
    (0..size)
        .filter(|&m| ok[m] && !above[m])
        .map(|m| (0..n).filter(|&i| has(m, i)).collect())
        .collect()
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn full(n: usize) -> Self {
        let mut b = Bits::new(n);
        (0..n).for_each(|i| b.set(i));
        b
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn minus(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & !b).collect())
    }
    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
    fn ones(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (k, &w) in self.0.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(k * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }
}

/// Maximal independent sets containing `forced`, by Bron-Kerbosch with
/// pivoting on the complement of the exclusion graph.
fn independent_sets(n: usize, exc: &[(usize, usize)], forced: &[usize]) -> Vec<Vec<usize>> {
    let mut compat: Vec<Bits> = (0..n)
        .map(|i| {
            let mut b = Bits::full(n);
            b.clear(i);
            b
        })
        .collect();
    for &(a, b) in exc {
        compat[a].clear(b);
        compat[b].clear(a);
        if a == b {
            compat[a].clear(a);
        }
    }
    let self_excluded: BTreeSet<usize> = exc.iter().filter(|(a, b)| a == b).map(|&(a, _)| a).collect();
    let mut p = Bits::full(n);
    for &i in &self_excluded {
        p.clear(i);
    }
    let mut r = Vec::new();
    for &f in forced {
        if self_excluded.contains(&f) || r.iter().any(|&g: &usize| !compat[g].get(f)) {
            return Vec::new();
        }
        r.push(f);
        p = p.and(&compat[f]);
    }
    let mut out = Vec::new();
    bron_kerbosch(&compat, &mut r, p, Bits::new(n), &mut out);
    out
}

fn bron_kerbosch(n: &[Bits], r: &mut Vec<usize>, mut p: Bits, mut x: Bits, out: &mut Vec<Vec<usize>>) {
    if p.is_empty() {
        if x.is_empty() {
            let mut set = r.clone();
            set.sort_unstable();
            out.push(set);
        }
        return;
    }
    let pivot = p
        .ones()
        .into_iter()
        .chain(x.ones())
        .max_by_key(|&u| p.and(&n[u]).count())
        .expect("p is non-empty");
    for v in p.minus(&n[pivot]).ones() {
        r.push(v);
        bron_kerbosch(n, r, p.and(&n[v]), x.and(&n[v]), out);
        r.pop();
        p.clear(v);
        x.set(v);
    }
}
