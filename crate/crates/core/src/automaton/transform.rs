use std::collections::BTreeSet;

use super::{Automaton, Edge, Letter, OrderedPartition, StateId};
use crate::error::{Error, Result};

/// A quotient automaton together with the class of every original state.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub automaton: Automaton,
    /// `class[v]` is the quotient state (= part index) of original state `v`.
    pub class: Vec<StateId>,
}

impl Automaton {
    /// Splits every state with `k` distinct in-letters into `k` copies, one
    /// per letter, each inheriting all out-edges of the original.
    ///
    /// Returns the new automaton and, for every new state, its original.
    /// Copies are numbered by `(original id, letter)`; states without
    /// in-edges keep a single copy. The result is the identity on
    /// input-consistent automata.
    pub fn make_input_consistent(&self) -> (Automaton, Vec<StateId>) {
        let n = self.n();
        // first_copy[v] .. first_copy[v+1] are the copies of v, one per
        // distinct in-letter in ascending order.
        let mut letters_of: Vec<Vec<Letter>> = Vec::with_capacity(n);
        for v in self.states() {
            let mut ls: Vec<Letter> = self.in_edges(v).map(|e| e.letter).collect();
            ls.dedup(); // in-edges are ordered by letter
            letters_of.push(ls);
        }
        let mut first_copy = Vec::with_capacity(n + 1);
        let mut original = Vec::new();
        for (v, ls) in letters_of.iter().enumerate() {
            first_copy.push(original.len() as u32);
            let copies = ls.len().max(1);
            original.extend(std::iter::repeat(StateId(v as u32)).take(copies));
        }
        first_copy.push(original.len() as u32);

        let copy_for = |v: StateId, a: Letter| -> u32 {
            let ls = &letters_of[v.index()];
            let k = ls.binary_search(&a).expect("letter of an in-edge");
            first_copy[v.index()] + k as u32
        };
        let mut edges = Vec::new();
        for e in self.edges() {
            let target = copy_for(e.to, e.letter);
            for u in first_copy[e.from.index()]..first_copy[e.from.index() + 1] {
                edges.push(Edge::new(u, target, e.letter.0));
            }
        }
        let source = StateId(first_copy[self.source().index()]);
        let mut out = Automaton::new(original.len(), self.sigma(), source, edges)
            .expect("copies stay in range");
        out.set_letter_names(self.letter_names().map(<[String]>::to_vec));
        (out, original)
    }

    /// Reverses every edge. The source is carried over unchanged; the result
    /// is generally not a valid input for refinement.
    pub fn reversed(&self) -> Automaton {
        let edges = self
            .edges()
            .iter()
            .map(|e| Edge {
                from: e.to,
                to: e.from,
                letter: e.letter,
            })
            .collect();
        Automaton::new(self.n(), self.sigma(), self.source(), edges).expect("same ranges")
    }

    /// Collapses each part of `p` into one state; part index = new state id.
    pub fn quotient(&self, p: &OrderedPartition) -> Result<Quotient> {
        if p.num_states() != self.n() {
            return Err(Error::Contract(format!(
                "partition covers {} states, automaton has {}",
                p.num_states(),
                self.n()
            )));
        }
        let idx = p.part_index();
        let source_part = idx[self.source().index()];
        if p.parts()[source_part].len() != 1 {
            return Err(Error::Contract(
                "the part containing the source must be a singleton".into(),
            ));
        }
        let mut set = BTreeSet::new();
        for e in self.edges() {
            set.insert(Edge::new(
                idx[e.from.index()] as u32,
                idx[e.to.index()] as u32,
                e.letter.0,
            ));
        }
        let mut automaton = Automaton::new(
            p.len(),
            self.sigma(),
            StateId(source_part as u32),
            set.into_iter().collect(),
        )?;
        automaton.set_letter_names(self.letter_names().map(<[String]>::to_vec));
        Ok(Quotient {
            automaton,
            class: idx.into_iter().map(|i| StateId(i as u32)).collect(),
        })
    }
}

/// The path automaton spelling `s`: state `i` is reached exactly by `s[..i]`.
///
/// Letters are renumbered densely in their original order so that every
/// letter of the resulting alphabet occurs; the co-lex order of prefixes is
/// unaffected.
pub fn path_dfa(s: &[Letter]) -> Result<Automaton> {
    if s.is_empty() {
        return Err(Error::EmptyString);
    }
    let mut used: Vec<Letter> = s.to_vec();
    used.sort_unstable();
    used.dedup();
    let code = |a: Letter| used.binary_search(&a).unwrap() as u32;
    let edges = s
        .iter()
        .enumerate()
        .map(|(i, &a)| Edge::new(i as u32, i as u32 + 1, code(a)))
        .collect();
    Automaton::new(s.len() + 1, used.len() as u32, StateId(0), edges)
}
