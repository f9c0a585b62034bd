//! Work-list classification of incidence structures: triples, quads and quints of planes
//! grown one free quadruple at a time, closed under the forcing rules and deduplicated up
//! to relabeling.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::canon::{canonical_key, relabel_derived};
use crate::combinatorics::census::{bit_masks, derive, quads_over, quads_under};
use crate::combinatorics::subsets::{digits, parse_digits, quads, quints, triples, PlaneSet};
use crate::combinatorics::{DerivedIncidence, IncidenceTable, Perm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Contradiction {
    /// Two triple lines in two common planes.
    TriplesShareTwo,
    /// Two fivefold points on four common planes.
    QuintsShareFour,
    TooManyTriples,
    TooManyQuints,
}

impl Contradiction {
    pub const ALL: [Contradiction; 4] = [
        Contradiction::TriplesShareTwo,
        Contradiction::QuintsShareFour,
        Contradiction::TooManyTriples,
        Contradiction::TooManyQuints,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Contradiction::TriplesShareTwo => "triples-share-two",
            Contradiction::QuintsShareFour => "quints-share-four",
            Contradiction::TooManyTriples => "too-many-triples",
            Contradiction::TooManyQuints => "too-many-quints",
        }
    }
}

impl fmt::Display for Contradiction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

pub const MAX_TRIPLES: u32 = 4;
pub const MAX_QUINTS: u32 = 4;

/// Triples and quints are bitsets over their subset ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EnumState {
    pub triples: u64,
    pub quads: IncidenceTable,
    pub quints: u64,
    pub depth: u32,
}

fn rank_bit(index: &[u8; 256], m: PlaneSet) -> u64 {
    1u64 << index[m as usize]
}

impl EnumState {
    /// The starting state: one fourfold point `1234`.
    pub fn initial() -> Self {
        EnumState {
            triples: 0,
            quads: IncidenceTable::from_masks([0b1111]),
            quints: 0,
            depth: 1,
        }
    }

    /// The full structure of a table: its quads with every derived triple line and fivefold
    /// point.
    pub fn from_table(table: &IncidenceTable) -> Self {
        let d = derive(table);
        EnumState {
            triples: d.triples,
            quads: *table,
            quints: d.quints,
            depth: 0,
        }
    }

    pub fn triple_masks(&self) -> Vec<PlaneSet> {
        bit_masks(self.triples, &triples().masks)
    }

    pub fn quint_masks(&self) -> Vec<PlaneSet> {
        bit_masks(self.quints, &quints().masks)
    }

    pub fn add_triple(&mut self, t: PlaneSet) {
        self.triples |= rank_bit(&triples().rank, t);
    }

    pub fn add_quint(&mut self, p: PlaneSet) {
        self.quints |= rank_bit(&quints().rank, p);
    }

    pub fn has_triple(&self, t: PlaneSet) -> bool {
        self.triples & rank_bit(&triples().rank, t) != 0
    }

    pub fn has_quint(&self, p: PlaneSet) -> bool {
        self.quints & rank_bit(&quints().rank, p) != 0
    }

    /// Whether every list of `self` is contained in the matching list of `other`.
    pub fn is_substate(&self, other: &EnumState) -> bool {
        self.triples & !other.triples == 0
            && self.quints & !other.quints == 0
            && self.quads.is_subset(&other.quads)
    }

    fn same_lists(&self, other: &EnumState) -> bool {
        self.triples == other.triples && self.quads == other.quads && self.quints == other.quints
    }

    fn derived(&self) -> DerivedIncidence {
        DerivedIncidence {
            triples: self.triples,
            quints: self.quints,
        }
    }

    /// Adds the quads forced by triples and quints; returns whether anything changed.
    fn force(&mut self) -> bool {
        let before = self.quads;
        for t in self.triple_masks() {
            quads_over(t).for_each(|q| self.quads.insert(q));
        }
        for p in self.quint_masks() {
            quads_under(p).for_each(|q| self.quads.insert(q));
        }
        before != self.quads
    }

    pub fn violation(&self) -> Option<Contradiction> {
        if self.triples.count_ones() > MAX_TRIPLES {
            return Some(Contradiction::TooManyTriples);
        }
        if self.quints.count_ones() > MAX_QUINTS {
            return Some(Contradiction::TooManyQuints);
        }
        let ts = self.triple_masks();
        for (i, a) in ts.iter().enumerate() {
            if ts[i + 1..].iter().any(|b| (a & b).count_ones() >= 2) {
                return Some(Contradiction::TriplesShareTwo);
            }
        }
        let ps = self.quint_masks();
        for (i, a) in ps.iter().enumerate() {
            if ps[i + 1..].iter().any(|b| (a & b).count_ones() >= 4) {
                return Some(Contradiction::QuintsShareFour);
            }
        }
        None
    }

    /// First pair of quads sharing three planes where neither the common triple nor the
    /// union quint is recorded.
    fn open_pair(&self) -> Option<(PlaneSet, PlaneSet)> {
        let qs = self.quads.masks();
        for (i, a) in qs.iter().enumerate() {
            for b in &qs[i + 1..] {
                if (a & b).count_ones() == 3 {
                    let (t, p) = (a & b, a | b);
                    if !self.has_triple(t) && !self.has_quint(p) {
                        return Some((t, p));
                    }
                }
            }
        }
        None
    }

    pub fn is_closed(&self) -> bool {
        let mut s = *self;
        !s.force() && s.violation().is_none() && s.open_pair().is_none()
    }

    /// Canonical relabeling: minimal quads first, then triples and quints under the same
    /// permutation.
    pub fn canonical(&self) -> (CanonicalState, Perm) {
        let (q, d, p) = canonical_key(&self.quads, &self.derived());
        (
            CanonicalState {
                triples: d.triples,
                quads: q,
                quints: d.quints,
            },
            p,
        )
    }

    pub fn relabel(&self, p: &Perm) -> EnumState {
        let d = relabel_derived(&self.derived(), p);
        EnumState {
            triples: d.triples,
            quads: self.quads.relabel(p),
            quints: d.quints,
            depth: self.depth,
        }
    }
}

/// The lists of a state in canonical labeling; the dedup key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalState {
    pub triples: u64,
    pub quads: IncidenceTable,
    pub quints: u64,
}

impl CanonicalState {
    pub fn state(&self, depth: u32) -> EnumState {
        EnumState {
            triples: self.triples,
            quads: self.quads,
            quints: self.quints,
            depth,
        }
    }
}

fn join(masks: Vec<PlaneSet>) -> String {
    masks.into_iter().map(digits).collect::<Vec<_>>().join(",")
}

impl fmt::Display for EnumState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "T:{{{}}} Q:{{{}}} P:{{{}}}",
            join(self.triple_masks()),
            join(self.quads.masks()),
            join(self.quint_masks())
        )
    }
}

impl fmt::Display for CanonicalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.state(0).fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse state `{0}`")]
pub struct StateParseError(pub String);

impl std::str::FromStr for EnumState {
    type Err = StateParseError;

    /// Parses the emitted form `T:{123} Q:{1234,1235} P:{}`; depth is set to 0.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || StateParseError(s.to_string());
        let mut st = EnumState {
            triples: 0,
            quads: IncidenceTable::EMPTY,
            quints: 0,
            depth: 0,
        };
        for part in s.split_whitespace() {
            let (tag, body) = part.split_once(':').ok_or_else(err)?;
            let body = body
                .strip_prefix('{')
                .and_then(|b| b.strip_suffix('}'))
                .ok_or_else(err)?;
            for item in body.split(',').filter(|x| !x.is_empty()) {
                let m = parse_digits(item).ok_or_else(err)?;
                match (tag, m.count_ones()) {
                    ("T", 3) => st.add_triple(m),
                    ("Q", 4) => st.quads.insert(m),
                    ("P", 5) => st.quints |= rank_bit(&quints().rank, m),
                    _ => return Err(err()),
                }
            }
        }
        Ok(st)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureOutcome {
    Contradiction(Contradiction),
    /// Closed successors, deduplicated and sorted.
    Closed(Vec<EnumState>),
}

#[derive(Debug, Clone, Default)]
struct ClosureRun {
    closed: BTreeSet<EnumState>,
    prunes: BTreeMap<Contradiction, usize>,
    first: Option<Contradiction>,
}

fn close_into(start: EnumState, run: &mut ClosureRun) {
    let mut stack = vec![start];
    while let Some(mut s) = stack.pop() {
        while s.force() {}
        if let Some(c) = s.violation() {
            *run.prunes.entry(c).or_default() += 1;
            run.first.get_or_insert(c);
            continue;
        }
        match s.open_pair() {
            Some((t, p)) => {
                let mut with_quint = s;
                with_quint.add_quint(p);
                let mut with_triple = s;
                with_triple.add_triple(t);
                stack.push(with_quint);
                stack.push(with_triple);
            }
            None => {
                run.closed.insert(s);
            }
        }
    }
}

/// Closes a state under the forcing rules, forking at every pair of quads with three common
/// planes into the triple-line and the fivefold-point reading.
pub fn closure(s: &EnumState) -> ClosureOutcome {
    let mut run = ClosureRun::default();
    close_into(*s, &mut run);
    if run.closed.is_empty() {
        let first = run
            .first
            .expect("a run without branches records its contradiction");
        return ClosureOutcome::Contradiction(first);
    }
    ClosureOutcome::Closed(run.closed.into_iter().collect())
}

#[derive(Debug, Clone, Default)]
pub struct Expansion {
    pub successors: BTreeMap<CanonicalState, EnumState>,
    pub prunes: BTreeMap<Contradiction, usize>,
}

/// All canonical successors of a closed state obtained by adding one absent quad.
pub fn expand(s: &EnumState) -> Expansion {
    let mut run = ClosureRun::default();
    for &q in &quads().masks {
        if !s.quads.contains(q) {
            let mut next = *s;
            next.quads.insert(q);
            next.depth = s.depth + 1;
            close_into(next, &mut run);
        }
    }
    let successors = run
        .closed
        .into_par_iter()
        .map(|st| {
            let (key, _) = st.canonical();
            (key, key.state(st.depth))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Expansion {
        successors,
        prunes: run.prunes,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DepthStats {
    pub depth: u32,
    /// Classes first reached at this depth.
    pub new_classes: usize,
    /// Closed successors produced before deduplication.
    pub successors: usize,
    pub prunes: BTreeMap<String, usize>,
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    /// Every class found, with the depth at which it was first reached.
    pub classes: BTreeMap<CanonicalState, u32>,
    pub stats: Vec<DepthStats>,
    /// Set when the class cap stopped the search early.
    pub truncated: bool,
}

impl Enumeration {
    pub fn classes_at(&self, depth: u32) -> impl Iterator<Item = &CanonicalState> {
        self.classes
            .iter()
            .filter(move |(_, &d)| d == depth)
            .map(|(k, _)| k)
    }

    pub fn contains(&self, s: &EnumState) -> bool {
        self.classes.contains_key(&s.canonical().0)
    }
}

/// Breadth-first search from the initial state up to `max_depth` free additions, stopping
/// once more than `cap` classes are known.
pub fn enumerate_classes(max_depth: u32, cap: usize) -> Enumeration {
    assert!(max_depth >= 1, "depth starts at 1");
    let mut classes = BTreeMap::new();
    let mut stats = Vec::new();
    let start = match closure(&EnumState::initial()) {
        ClosureOutcome::Closed(v) => v,
        ClosureOutcome::Contradiction(_) => unreachable!("a single quad is consistent"),
    };
    let mut frontier: Vec<EnumState> = Vec::new();
    for s in start {
        let (key, _) = s.canonical();
        if classes.insert(key, 1).is_none() {
            frontier.push(key.state(1));
        }
    }
    stats.push(DepthStats {
        depth: 1,
        new_classes: frontier.len(),
        successors: frontier.len(),
        prunes: BTreeMap::new(),
    });
    let mut truncated = false;
    for depth in 2..=max_depth {
        if frontier.is_empty() {
            break;
        }
        let expansions: Vec<Expansion> = frontier.par_iter().map(expand).collect();
        let mut prunes: BTreeMap<String, usize> = BTreeMap::new();
        let mut produced = 0;
        let mut next = Vec::new();
        for e in expansions {
            for (c, n) in e.prunes {
                *prunes.entry(c.key().to_string()).or_default() += n;
            }
            produced += e.successors.len();
            for (key, st) in e.successors {
                if let std::collections::btree_map::Entry::Vacant(e) = classes.entry(key) {
                    e.insert(depth);
                    next.push(st);
                }
            }
        }
        next.sort();
        stats.push(DepthStats {
            depth,
            new_classes: next.len(),
            successors: produced,
            prunes,
        });
        if classes.len() > cap {
            truncated = depth < max_depth;
            break;
        }
        frontier = next;
    }
    Enumeration {
        classes,
        stats,
        truncated,
    }
}

/// A subset of a table's quads whose closure has a branch equal to the full structure,
/// found greedily.
#[derive(Debug, Clone, Serialize)]
pub struct Generation {
    pub generators: Vec<String>,
    /// Whether the greedy search reached the full structure.
    pub complete: bool,
}

fn compatible_branches(s: EnumState, target: &EnumState) -> Vec<EnumState> {
    let mut run = ClosureRun::default();
    close_into(s, &mut run);
    run.closed
        .into_iter()
        .filter(|b| b.is_substate(target))
        .collect()
}

/// Greedy generating set: repeatedly adds the quad whose closure grows the state the most
/// while staying inside the target structure.
pub fn generating_quads(table: &IncidenceTable) -> Generation {
    let target = EnumState::from_table(table);
    let masks = table.masks();
    let mut state = EnumState {
        triples: 0,
        quads: IncidenceTable::EMPTY,
        quints: 0,
        depth: 0,
    };
    let mut generators = Vec::new();
    loop {
        if state.same_lists(&target) {
            return Generation {
                generators,
                complete: true,
            };
        }
        let best = masks
            .iter()
            .filter(|&&q| !state.quads.contains(q))
            .flat_map(|&q| {
                let mut next = state;
                next.quads.insert(q);
                compatible_branches(next, &target)
                    .into_iter()
                    .map(move |b| (q, b))
            })
            .max_by_key(|(q, b)| {
                (
                    b.quads.len() + (b.triples | b.quints).count_ones() as usize,
                    std::cmp::Reverse(*q),
                )
            });
        match best {
            Some((q, b)) => {
                generators.push(digits(q));
                state = b;
            }
            None => {
                return Generation {
                    generators,
                    complete: false,
                }
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReachabilityEntry {
    pub label: String,
    pub generators: usize,
    pub complete: bool,
    /// Whether the table's full structure is closed and consistent.
    pub closed: bool,
    /// `None` when more free additions are needed than were enumerated.
    pub reached: Option<bool>,
}

/// For each given table, whether the enumeration contains its class.
pub fn reachability(
    tables: &[(&str, IncidenceTable)],
    enumeration: &Enumeration,
    max_depth: u32,
) -> Vec<ReachabilityEntry> {
    tables
        .par_iter()
        .map(|(label, t)| {
            let g = generating_quads(t);
            let full = EnumState::from_table(t);
            let within = g.complete && g.generators.len() as u32 <= max_depth;
            ReachabilityEntry {
                label: label.to_string(),
                generators: g.generators.len(),
                complete: g.complete,
                closed: full.is_closed(),
                reached: within.then(|| enumeration.contains(&full)),
            }
        })
        .collect()
}

/// Checks that every triple and quint of a closure is honoured by the given table, the
/// realization direction of the search.
pub fn realizes(table: &IncidenceTable, target: &EnumState) -> bool {
    let d = derive(table);
    target.quads.is_subset(table) && d.triples == target.triples && d.quints == target.quints
}
