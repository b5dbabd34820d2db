//! Labeled transition structures with a designated source state.
//!
//! States are dense integers `0..n`, letters are dense integers `0..sigma`
//! whose numeric order is the alphabet order. An [`Automaton`] may be built
//! from any edge list; [`Automaton::validate`] reports which of the standing
//! assumptions (source without in-edges, reachability, input-consistency,
//! every letter used) are violated. The refinement algorithms require a
//! clean validation.

mod format;
mod transform;

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

pub use format::{parse_automaton, parse_ordered_partition, ParseWarning};
pub use transform::{path_dfa, Quotient};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u32);

impl Letter {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

impl StateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A labeled transition `from --letter--> to`.
///
/// The derived order is the canonical serialization order `(from, to, letter)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: StateId,
    pub to: StateId,
    pub letter: Letter,
}

impl Edge {
    pub fn new(from: u32, to: u32, letter: u32) -> Self {
        Edge {
            from: StateId(from),
            to: StateId(to),
            letter: Letter(letter),
        }
    }
}

/// A violated standing assumption, as reported by [`Automaton::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    SourceInEdge { from: StateId },
    Unreachable(StateId),
    InLabelConflict(StateId),
    UnusedLetter(Letter),
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::SourceInEdge { from } => {
                write!(f, "source has in-edge (from state {from})")
            }
            Diagnostic::Unreachable(v) => write!(f, "state {v} is unreachable from the source"),
            Diagnostic::InLabelConflict(v) => write!(f, "in-label conflict at {v}"),
            Diagnostic::UnusedLetter(a) => write!(f, "letter {a} labels no edge"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Automaton {
    n: usize,
    sigma: u32,
    source: StateId,
    /// Sorted by `(from, to, letter)`, no duplicates.
    edges: Vec<Edge>,
    /// CSR over edge ids, per state ordered by `(letter, to)`.
    out_start: Vec<u32>,
    out_ids: Vec<u32>,
    /// CSR over edge ids, per state ordered by `(letter, from)`.
    in_start: Vec<u32>,
    in_ids: Vec<u32>,
    /// Smallest in-letter per state; `None` means no in-edges (the source's ε).
    in_label: Vec<Option<Letter>>,
    letter_names: Option<Vec<String>>,
}

impl PartialEq for Automaton {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.sigma == other.sigma
            && self.source == other.source
            && self.edges == other.edges
    }
}

impl Eq for Automaton {}

impl Automaton {
    /// Builds an automaton from an arbitrary edge list.
    ///
    /// Duplicate edges are dropped; the number dropped is returned alongside.
    pub fn with_duplicates(
        n: usize,
        sigma: u32,
        source: StateId,
        mut edges: Vec<Edge>,
    ) -> Result<(Self, usize)> {
        if n == 0 {
            return Err(Error::Contract("automaton needs at least one state".into()));
        }
        if n > u32::MAX as usize || edges.len() >= u32::MAX as usize {
            return Err(Error::Contract("automaton too large for 32-bit ids".into()));
        }
        if source.index() >= n {
            return Err(Error::Contract(format!("source {source} out of range")));
        }
        for e in &edges {
            if e.from.index() >= n || e.to.index() >= n {
                return Err(Error::Contract(format!(
                    "edge ({}, {}, {}): state out of range",
                    e.from, e.to, e.letter
                )));
            }
            if e.letter.0 >= sigma {
                return Err(Error::Contract(format!(
                    "edge ({}, {}, {}): letter out of range",
                    e.from, e.to, e.letter
                )));
            }
        }
        let before = edges.len();
        edges.sort_unstable();
        edges.dedup();
        let dups = before - edges.len();
        Ok((Self::from_sorted(n, sigma, source, edges), dups))
    }

    pub fn new(n: usize, sigma: u32, source: StateId, edges: Vec<Edge>) -> Result<Self> {
        Self::with_duplicates(n, sigma, source, edges).map(|(a, _)| a)
    }

    /// Convenience constructor from `(from, to, letter)` triples.
    pub fn from_triples(n: usize, sigma: u32, source: u32, triples: &[(u32, u32, u32)]) -> Result<Self> {
        let edges = triples.iter().map(|&(u, v, a)| Edge::new(u, v, a)).collect();
        Self::new(n, sigma, StateId(source), edges)
    }

    fn from_sorted(n: usize, sigma: u32, source: StateId, edges: Vec<Edge>) -> Self {
        let m = edges.len();
        let mut out_start = vec![0u32; n + 1];
        let mut in_start = vec![0u32; n + 1];
        for e in &edges {
            out_start[e.from.index() + 1] += 1;
            in_start[e.to.index() + 1] += 1;
        }
        for i in 0..n {
            out_start[i + 1] += out_start[i];
            in_start[i + 1] += in_start[i];
        }
        let mut out_ids = vec![0u32; m];
        let mut in_ids = vec![0u32; m];
        let mut out_fill = out_start.clone();
        let mut in_fill = in_start.clone();
        for (id, e) in edges.iter().enumerate() {
            let slot = &mut out_fill[e.from.index()];
            out_ids[*slot as usize] = id as u32;
            *slot += 1;
        }
        // Edges are sorted by `from`, so in-lists come out ordered by source;
        // a stable sort by letter yields `(letter, from)`.
        for (id, e) in edges.iter().enumerate() {
            let slot = &mut in_fill[e.to.index()];
            in_ids[*slot as usize] = id as u32;
            *slot += 1;
        }
        for u in 0..n {
            let (lo, hi) = (out_start[u] as usize, out_start[u + 1] as usize);
            out_ids[lo..hi].sort_by_key(|&id| {
                let e = &edges[id as usize];
                (e.letter, e.to)
            });
            let (lo, hi) = (in_start[u] as usize, in_start[u + 1] as usize);
            in_ids[lo..hi].sort_by_key(|&id| edges[id as usize].letter);
        }
        let in_label = (0..n)
            .map(|v| {
                let (lo, hi) = (in_start[v] as usize, in_start[v + 1] as usize);
                in_ids[lo..hi].first().map(|&id| edges[id as usize].letter)
            })
            .collect();
        Automaton {
            n,
            sigma,
            source,
            edges,
            out_start,
            out_ids,
            in_start,
            in_ids,
            in_label,
            letter_names: None,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    #[inline]
    pub fn source(&self) -> StateId {
        self.source
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// All edges in canonical `(from, to, letter)` order.
    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, id: u32) -> &Edge {
        &self.edges[id as usize]
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.n as u32).map(StateId)
    }

    /// Ids of the out-edges of `u`, ordered by `(letter, to)`.
    #[inline]
    pub fn out_edge_ids(&self, u: StateId) -> &[u32] {
        let u = u.index();
        &self.out_ids[self.out_start[u] as usize..self.out_start[u + 1] as usize]
    }

    /// Edges are stored sorted by source, so the out-edges of `u` occupy
    /// this contiguous id range (in `(to, letter)` order).
    #[inline]
    pub fn out_edge_range(&self, u: StateId) -> std::ops::Range<u32> {
        self.out_start[u.index()]..self.out_start[u.index() + 1]
    }

    /// Ids of the in-edges of `v`, ordered by `(letter, from)`.
    #[inline]
    pub fn in_edge_ids(&self, v: StateId) -> &[u32] {
        let v = v.index();
        &self.in_ids[self.in_start[v] as usize..self.in_start[v + 1] as usize]
    }

    pub fn out_edges(&self, u: StateId) -> impl Iterator<Item = &Edge> + '_ {
        self.out_edge_ids(u).iter().map(move |&id| &self.edges[id as usize])
    }

    pub fn in_edges(&self, v: StateId) -> impl Iterator<Item = &Edge> + '_ {
        self.in_edge_ids(v).iter().map(move |&id| &self.edges[id as usize])
    }

    /// `δ_a(u)`.
    pub fn successors(&self, u: StateId, a: Letter) -> impl Iterator<Item = StateId> + '_ {
        let ids = self.out_edge_ids(u);
        let lo = ids.partition_point(|&id| self.edges[id as usize].letter < a);
        let hi = ids.partition_point(|&id| self.edges[id as usize].letter <= a);
        ids[lo..hi].iter().map(move |&id| self.edges[id as usize].to)
    }

    /// `δ_a^{-1}(v)`.
    pub fn predecessors(&self, v: StateId, a: Letter) -> impl Iterator<Item = StateId> + '_ {
        let ids = self.in_edge_ids(v);
        let lo = ids.partition_point(|&id| self.edges[id as usize].letter < a);
        let hi = ids.partition_point(|&id| self.edges[id as usize].letter <= a);
        ids[lo..hi].iter().map(move |&id| self.edges[id as usize].from)
    }

    /// `λ(v)`: the in-letter of `v`, `None` for ε (no in-edges).
    ///
    /// For states violating input-consistency this is the smallest in-letter.
    #[inline]
    pub fn in_label(&self, v: StateId) -> Option<Letter> {
        self.in_label[v.index()]
    }

    pub fn letter_names(&self) -> Option<&[String]> {
        self.letter_names.as_deref()
    }

    pub fn set_letter_names(&mut self, names: Option<Vec<String>>) {
        self.letter_names = names;
    }

    pub fn is_deterministic(&self) -> bool {
        self.first_nondeterminism().is_none()
    }

    pub(crate) fn first_nondeterminism(&self) -> Option<(StateId, Letter)> {
        for u in self.states() {
            let ids = self.out_edge_ids(u);
            for w in ids.windows(2) {
                let (a, b) = (&self.edges[w[0] as usize], &self.edges[w[1] as usize]);
                if a.letter == b.letter {
                    return Some((u, a.letter));
                }
            }
        }
        None
    }

    pub fn require_deterministic(&self) -> Result<()> {
        match self.first_nondeterminism() {
            None => Ok(()),
            Some((u, a)) => Err(Error::NotDeterministic {
                state: u.0,
                letter: a.0,
            }),
        }
    }

    /// Checks the standing assumptions; an empty list means all hold.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut diags = Vec::new();
        for e in self.in_edges(self.source) {
            diags.push(Diagnostic::SourceInEdge { from: e.from });
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([self.source]);
        seen[self.source.index()] = true;
        while let Some(u) = queue.pop_front() {
            for e in self.out_edges(u) {
                if !seen[e.to.index()] {
                    seen[e.to.index()] = true;
                    queue.push_back(e.to);
                }
            }
        }
        for v in self.states() {
            if !seen[v.index()] {
                diags.push(Diagnostic::Unreachable(v));
            }
        }
        for v in self.states() {
            let mut letters = self.in_edges(v).map(|e| e.letter);
            if let Some(first) = letters.next() {
                if letters.any(|a| a != first) {
                    diags.push(Diagnostic::InLabelConflict(v));
                }
            }
        }
        let mut used = vec![false; self.sigma as usize];
        for e in &self.edges {
            used[e.letter.index()] = true;
        }
        for (a, u) in used.iter().enumerate() {
            if !u {
                diags.push(Diagnostic::UnusedLetter(Letter(a as u32)));
            }
        }
        diags
    }

    pub fn require_valid(&self) -> Result<()> {
        let diags = self.validate();
        if diags.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(diags))
        }
    }
}

/// An ordered sequence of disjoint non-empty parts covering `0..n`.
///
/// Part order is significant: it encodes a total preorder on the states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedPartition {
    parts: Vec<Vec<StateId>>,
}

impl OrderedPartition {
    /// Checks disjointness and coverage of `0..n`; ids are sorted within parts.
    pub fn new(mut parts: Vec<Vec<StateId>>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut count = 0usize;
        for part in parts.iter_mut() {
            if part.is_empty() {
                return Err(Error::Contract("empty part in ordered partition".into()));
            }
            part.sort_unstable();
            for &v in part.iter() {
                if v.index() >= n {
                    return Err(Error::Contract(format!("state {v} out of range")));
                }
                if std::mem::replace(&mut seen[v.index()], true) {
                    return Err(Error::Contract(format!("state {v} occurs in two parts")));
                }
                count += 1;
            }
        }
        if count != n {
            return Err(Error::Contract(format!(
                "partition covers {count} of {n} states"
            )));
        }
        Ok(OrderedPartition { parts })
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<Vec<StateId>>) -> Self {
        OrderedPartition { parts }
    }

    /// One singleton part per state, in the given order.
    pub fn from_order(order: &[StateId]) -> Result<Self> {
        Self::new(order.iter().map(|&v| vec![v]).collect(), order.len())
    }

    pub fn parts(&self) -> &[Vec<StateId>] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn num_states(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }

    /// Index of the part containing each state.
    pub fn part_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.num_states()];
        for (i, part) in self.parts.iter().enumerate() {
            for &v in part {
                idx[v.index()] = i;
            }
        }
        idx
    }

    pub fn is_all_singletons(&self) -> bool {
        self.parts.iter().all(|p| p.len() == 1)
    }

    /// The states in part order, when every part is a singleton.
    pub fn as_order(&self) -> Option<Vec<StateId>> {
        self.is_all_singletons()
            .then(|| self.parts.iter().map(|p| p[0]).collect())
    }

    /// Part contents without their order: parts sorted by smallest member.
    pub fn unordered(&self) -> Vec<Vec<StateId>> {
        canonical_parts(self.parts.clone())
    }

    pub fn to_ordpart_string(&self) -> String {
        let mut s = format!("ORDPART {}\n", self.parts.len());
        for (i, part) in self.parts.iter().enumerate() {
            s.push_str(&format!("{i}:"));
            for v in part {
                s.push_str(&format!(" {v}"));
            }
            s.push('\n');
        }
        s
    }
}

/// Normal form of an unordered partition: sorted parts, sorted by first element.
pub fn canonical_parts(mut parts: Vec<Vec<StateId>>) -> Vec<Vec<StateId>> {
    for p in parts.iter_mut() {
        p.sort_unstable();
    }
    parts.sort_unstable();
    parts
}
