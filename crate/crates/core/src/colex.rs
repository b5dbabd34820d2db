//! Smallest-width co-lex order of a DFA.
//!
//! The infimum and supremum automata are merged into one functional graph
//! on `2n` nodes (`v` is the inf copy of state `v`, `n + v` its sup copy).
//! Prefix doubling over the predecessor links sorts all `2n` bound strings;
//! each state then owns the interval between its two ranks, and a greedy
//! sweep covers the intervals with a minimum number of chains.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::automaton::{Automaton, Letter, StateId};
use crate::error::{Error, Result};
use crate::prune::{refine_with_pruning, Direction, PrunedAutomaton};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergedGraph {
    n: usize,
    phi: Vec<u32>,
    letter: Vec<Option<Letter>>,
}

impl MergedGraph {
    /// Number of states of the base DFA; the graph has twice as many nodes.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_nodes(&self) -> usize {
        self.phi.len()
    }

    pub fn phi(&self, node: usize) -> usize {
        self.phi[node] as usize
    }

    pub fn node_letter(&self, node: usize) -> Option<Letter> {
        self.letter[node]
    }

    pub fn inf_node(&self, v: StateId) -> usize {
        v.index()
    }

    pub fn sup_node(&self, v: StateId) -> usize {
        self.n + v.index()
    }
}

pub fn build_merged_graph(inf: &PrunedAutomaton, sup: &PrunedAutomaton) -> Result<MergedGraph> {
    if inf.n() != sup.n() || inf.source() != sup.source() {
        return Err(Error::Contract("pruned automata stem from different DFAs".into()));
    }
    if inf.direction() != Direction::Inf || sup.direction() != Direction::Sup {
        return Err(Error::Contract("expected an inf and a sup pruned automaton".into()));
    }
    let n = inf.n();
    let mut phi = Vec::with_capacity(2 * n);
    let mut letter = Vec::with_capacity(2 * n);
    for (offset, p) in [(0u32, inf), (n as u32, sup)] {
        for v in 0..n as u32 {
            match p.kept_in_edge(StateId(v)) {
                Some((u, a)) => {
                    phi.push(offset + u.0);
                    letter.push(Some(a));
                }
                None => {
                    phi.push(offset + v);
                    letter.push(None);
                }
            }
        }
    }
    Ok(MergedGraph { n, phi, letter })
}

/// Dense ranks of the `2n` nodes; equal ranks mean equal strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankTable {
    pub ranks: Vec<u32>,
    pub num_ranks: u32,
}

/// `⌈log₂(2n)⌉`.
pub fn doubling_rounds(n: usize) -> u32 {
    let nodes = (2 * n).max(1);
    usize::BITS - (nodes - 1).leading_zeros()
}

pub fn suffix_doubling_ranks(g: &MergedGraph) -> RankTable {
    suffix_doubling_ranks_with_rounds(g, doubling_rounds(g.n()))
}

/// Round 0 ranks by letter (source copies first), then `rounds` doubling
/// rounds on the key `(rank(u), rank(φ(u)))`, each a two-pass counting sort.
pub fn suffix_doubling_ranks_with_rounds(g: &MergedGraph, rounds: u32) -> RankTable {
    let nodes = g.num_nodes();
    let mut rank: Vec<u32> = g.letter.iter().map(|l| l.map_or(0, |a| a.0 + 1)).collect();
    let max_key = rank.iter().copied().max().unwrap_or(0) as usize;
    // Compact to dense ranks.
    let mut present = vec![false; max_key + 1];
    for &r in &rank {
        present[r as usize] = true;
    }
    let mut dense = vec![0u32; max_key + 1];
    let mut c = 0u32;
    for k in 0..=max_key {
        dense[k] = c;
        c += present[k] as u32;
    }
    for r in rank.iter_mut() {
        *r = dense[*r as usize];
    }
    let mut num_ranks = c;

    let mut phi = g.phi.clone();
    let mut order = vec![0u32; nodes];
    let mut tmp = vec![0u32; nodes];
    let mut bucket = vec![0u32; nodes + 1];
    let mut next_rank = vec![0u32; nodes];
    for _ in 0..rounds {
        // Secondary key: rank of the predecessor.
        counting_sort(
            (0..nodes as u32).map(|u| (u, rank[phi[u as usize] as usize])),
            num_ranks,
            &mut bucket,
            &mut tmp,
        );
        // Primary key, stable.
        counting_sort(
            tmp.iter().map(|&u| (u, rank[u as usize])),
            num_ranks,
            &mut bucket,
            &mut order,
        );
        let key = |u: u32| (rank[u as usize], rank[phi[u as usize] as usize]);
        let mut r = 0u32;
        for i in 0..nodes {
            if i > 0 && key(order[i]) != key(order[i - 1]) {
                r += 1;
            }
            next_rank[order[i] as usize] = r;
        }
        std::mem::swap(&mut rank, &mut next_rank);
        num_ranks = r + 1;
        for u in 0..nodes {
            tmp[u] = phi[phi[u] as usize];
        }
        std::mem::swap(&mut phi, &mut tmp);
    }
    RankTable {
        ranks: rank,
        num_ranks,
    }
}

fn counting_sort(
    items: impl Iterator<Item = (u32, u32)> + Clone,
    num_keys: u32,
    bucket: &mut [u32],
    out: &mut [u32],
) {
    let k = num_keys as usize;
    bucket[..=k].iter_mut().for_each(|b| *b = 0);
    for (_, key) in items.clone() {
        bucket[key as usize + 1] += 1;
    }
    for i in 0..k {
        bucket[i + 1] += bucket[i];
    }
    for (u, key) in items {
        out[bucket[key as usize] as usize] = u;
        bucket[key as usize] += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColexResult {
    /// All `2n` nodes by ascending rank, ties by node id.
    pub sorted_is: Vec<u32>,
    /// Per state `(infRank, supRank)`.
    pub intervals: Vec<(u32, u32)>,
    pub chains: Vec<Vec<StateId>>,
}

impl ColexResult {
    pub fn width(&self) -> usize {
        self.chains.len()
    }

    /// `u ≺ v` iff `supRank(u) ≤ infRank(v)` and `u ≠ v`.
    pub fn precedes(&self, u: StateId, v: StateId) -> bool {
        u != v && self.intervals[u.index()].1 <= self.intervals[v.index()].0
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("RANKS\n");
        for (v, (lo, hi)) in self.intervals.iter().enumerate() {
            writeln!(s, "{v} {lo} {hi}").unwrap();
        }
        writeln!(s, "CHAINS {}", self.chains.len()).unwrap();
        for c in &self.chains {
            let ids: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            writeln!(s, "{}", ids.join(" ")).unwrap();
        }
        s
    }
}

/// Greedy interval sweep: each state extends the chain with the greatest
/// last supRank not exceeding its infRank, or opens a new chain.
pub fn min_chain_partition(d: &Automaton, r: &RankTable) -> Result<ColexResult> {
    let n = d.n();
    if r.ranks.len() != 2 * n {
        return Err(Error::Contract(format!(
            "rank table has {} nodes, expected {}",
            r.ranks.len(),
            2 * n
        )));
    }
    let intervals: Vec<(u32, u32)> = (0..n).map(|v| (r.ranks[v], r.ranks[n + v])).collect();
    let mut sweep: Vec<u32> = (0..n as u32).collect();
    sweep.sort_unstable_by_key(|&v| (intervals[v as usize], v));
    let mut chains: Vec<Vec<StateId>> = Vec::new();
    let mut open: BTreeSet<(u32, usize)> = BTreeSet::new();
    for v in sweep {
        let (lo, hi) = intervals[v as usize];
        let idx = match open.range(..=(lo, usize::MAX)).next_back().copied() {
            Some(entry) => {
                open.remove(&entry);
                entry.1
            }
            None => {
                chains.push(Vec::new());
                chains.len() - 1
            }
        };
        chains[idx].push(StateId(v));
        open.insert((hi, idx));
    }
    let mut sorted_is: Vec<u32> = (0..2 * n as u32).collect();
    sorted_is.sort_unstable_by_key(|&u| (r.ranks[u as usize], u));
    Ok(ColexResult {
        sorted_is,
        intervals,
        chains,
    })
}

/// Both prunings, the merged graph, its ranks and the chain partition.
pub fn colex_order(d: &Automaton) -> Result<ColexResult> {
    let inf = refine_with_pruning(d, Direction::Inf)?;
    let sup = refine_with_pruning(d, Direction::Sup)?;
    let g = build_merged_graph(&inf.pruned, &sup.pruned)?;
    let ranks = suffix_doubling_ranks(&g);
    min_chain_partition(d, &ranks)
}
