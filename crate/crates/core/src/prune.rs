//! Refinement with edge pruning, yielding the infimum and supremum automata.
//!
//! After pruning every non-source state keeps one in-edge, and walking
//! these edges backwards spells the co-lex infimum (or supremum) of the
//! strings reaching the state.

use crate::automaton::{Automaton, Edge, Letter, OrderedPartition, StateId};
use crate::error::{Error, Result};
use crate::partition::{InitialOrder, PruneMode, RefineStats, Refinement};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Inf,
    Sup,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Inf => "inf",
            Direction::Sup => "sup",
        }
    }
}

/// One kept in-edge per non-source state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrunedAutomaton {
    n: usize,
    sigma: u32,
    source: StateId,
    direction: Direction,
    kept: Vec<Option<(StateId, Letter)>>,
}

impl PrunedAutomaton {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn source(&self) -> StateId {
        self.source
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// The kept in-edge `(from, letter)` of `v`; `None` only for the source.
    pub fn kept_in_edge(&self, v: StateId) -> Option<(StateId, Letter)> {
        self.kept[v.index()]
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut es: Vec<Edge> = self
            .kept
            .iter()
            .enumerate()
            .filter_map(|(v, k)| {
                k.map(|(u, a)| Edge {
                    from: u,
                    to: StateId(v as u32),
                    letter: a,
                })
            })
            .collect();
        es.sort_unstable();
        es
    }

    /// The kept edges as an automaton over the base alphabet.
    pub fn to_automaton(&self) -> Automaton {
        Automaton::new(self.n, self.sigma, self.source, self.edges()).expect("kept edges are in range")
    }

    pub fn to_nfa_string(&self) -> String {
        self.to_automaton()
            .to_nfa_string_with_comment(Some(&format!("pruned {}", self.direction.name())))
    }

    /// The last `min(k, walk length)` letters read walking back from `v`,
    /// oldest first.
    pub fn backward_walk(&self, v: StateId, k: usize) -> Vec<Letter> {
        let mut out = Vec::with_capacity(k);
        let mut cur = v;
        while out.len() < k {
            match self.kept[cur.index()] {
                Some((u, a)) => {
                    out.push(a);
                    cur = u;
                }
                None => break,
            }
        }
        out.reverse();
        out
    }
}

#[derive(Clone, Debug)]
pub struct PruneOutput {
    pub partition: OrderedPartition,
    pub pruned: PrunedAutomaton,
    pub stats: RefineStats,
}

/// Pruned refinement of a valid DFA. `Sup` starts from the reversed initial
/// order and otherwise prunes identically.
pub fn refine_with_pruning(a: &Automaton, direction: Direction) -> Result<PruneOutput> {
    let order = match direction {
        Direction::Inf => InitialOrder::Ascending,
        Direction::Sup => InitialOrder::Descending,
    };
    prune_with(a, order, PruneMode::KeepFirst, direction, false)
}

/// Pruned refinement with every knob exposed.
pub fn prune_with(
    a: &Automaton,
    order: InitialOrder,
    mode: PruneMode,
    direction: Direction,
    check_invariants: bool,
) -> Result<PruneOutput> {
    a.require_deterministic()?;
    a.require_valid()?;
    if mode == PruneMode::Off {
        return Err(Error::Contract("pruned refinement needs a pruning mode".into()));
    }
    let mut r = Refinement::new(a, order, mode);
    r.set_invariant_checks(check_invariants);
    r.run();
    let mut kept = vec![None; a.n()];
    for v in a.states() {
        // Several surviving in-edges: keep the one with the smallest source.
        kept[v.index()] = r
            .live_in_edges(v)
            .iter()
            .map(|&e| a.edge(e))
            .min_by_key(|e| e.from)
            .map(|e| (e.from, e.letter));
    }
    Ok(PruneOutput {
        partition: r.snapshot_partition(),
        pruned: PrunedAutomaton {
            n: a.n(),
            sigma: a.sigma(),
            source: a.source(),
            direction,
            kept,
        },
        stats: r.stats().clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_dfa() -> Automaton {
        Automaton::from_triples(3, 2, 0, &[(0, 1, 1), (1, 2, 0), (2, 2, 0)]).unwrap()
    }

    fn word(s: &str) -> Vec<Letter> {
        s.bytes().map(|b| Letter((b - b'a') as u32)).collect()
    }

    #[test]
    fn loop_dfa_inf() {
        let out = refine_with_pruning(&loop_dfa(), Direction::Inf).unwrap();
        let p = &out.pruned;
        assert_eq!(p.kept_in_edge(StateId(1)), Some((StateId(0), Letter(1))));
        assert_eq!(p.kept_in_edge(StateId(2)), Some((StateId(2), Letter(0))));
        assert_eq!(p.backward_walk(StateId(2), 6), word("aaaaaa"));
        assert_eq!(p.backward_walk(StateId(0), 6), vec![]);
        assert_eq!(out.stats.deleted_edges, 1);
    }

    #[test]
    fn loop_dfa_sup() {
        let out = refine_with_pruning(&loop_dfa(), Direction::Sup).unwrap();
        let p = &out.pruned;
        assert_eq!(p.kept_in_edge(StateId(2)), Some((StateId(1), Letter(0))));
        assert_eq!(p.backward_walk(StateId(2), 6), word("ba"));
        assert!(p.to_nfa_string().starts_with("# pruned sup\n"));
    }

    #[test]
    fn path_keeps_everything() {
        let a = crate::automaton::path_dfa(&word("abcab")).unwrap();
        let out = refine_with_pruning(&a, Direction::Inf).unwrap();
        assert_eq!(out.stats.deleted_edges, 0);
        assert_eq!(out.pruned.edges(), a.edges());
        assert_eq!(out.pruned.backward_walk(StateId(5), 3), word("cab"));
    }

    #[test]
    fn nfa_is_rejected() {
        let a = Automaton::from_triples(3, 1, 0, &[(0, 1, 0), (0, 2, 0)]).unwrap();
        let err = refine_with_pruning(&a, Direction::Inf).unwrap_err();
        assert!(err.to_string().starts_with("DFA required"));
    }

    #[test]
    fn invariants_hold_while_pruning() {
        for seed in 0..300 {
            let d = crate::gen::gen_random_dfa(2 + seed as usize % 11, 1 + (seed % 3) as u32, seed).unwrap();
            for (order, dir) in [
                (InitialOrder::Ascending, Direction::Inf),
                (InitialOrder::Descending, Direction::Sup),
            ] {
                let out = prune_with(&d, order, PruneMode::KeepFirst, dir, true).unwrap();
                for v in d.states() {
                    assert_eq!(out.pruned.kept_in_edge(v).is_none(), v == d.source());
                }
            }
        }
    }
}
