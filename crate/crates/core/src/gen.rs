//! Seeded instance generators.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::{Automaton, Edge, StateId};
use crate::error::{Error, Result};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A Wheeler NFA whose identity order is a Wheeler order.
///
/// States `1..n` are cut into `sigma` consecutive non-empty blocks, block
/// `a` taking letter `a`. The edges of each letter form a monotone
/// staircase in the (source, target) grid starting at a source before the
/// block and covering every target of the block, so sources and targets
/// grow together and every target is first entered from a smaller state.
/// Feasible iff `n > sigma` and `n - 1 <= m <= (sigma + 1)(n - 1)`.
pub fn gen_wheeler_nfa(n: usize, m: usize, sigma: u32, seed: u64) -> Result<Automaton> {
    let s = sigma as usize;
    if sigma == 0 || n < s + 1 {
        return Err(Error::Infeasible(format!(
            "{n} states cannot host {sigma} non-empty letter blocks"
        )));
    }
    if m < n - 1 || m > (s + 1) * (n - 1) {
        return Err(Error::Infeasible(format!(
            "edge count {m} outside [{}, {}] for n = {n}, sigma = {sigma}",
            n - 1,
            (s + 1) * (n - 1)
        )));
    }
    let mut r = rng(seed);

    // Block boundaries inside 1..n.
    let mut cuts: Vec<usize> = sample(&mut r, n - 2, s - 1)
        .into_iter()
        .map(|c| c + 2)
        .collect();
    cuts.sort_unstable();
    let mut bounds = Vec::with_capacity(s + 1);
    bounds.push(1usize);
    bounds.extend(cuts);
    bounds.push(n);

    // Distribute the source steps: one target step per state is forced,
    // every other edge moves the source forward.
    let mut extra = vec![0usize; s];
    let mut left = m - (n - 1);
    let cap = n - 1;
    while left > 0 {
        let a = r.gen_range(0..s);
        if extra[a] < cap {
            let room = (cap - extra[a]).min(left);
            let take = r.gen_range(1..=room.min(left.div_ceil(s).max(1)));
            extra[a] += take;
            left -= take;
        }
    }

    let mut edges = Vec::with_capacity(m);
    for a in 0..s {
        let (lo, hi) = (bounds[a], bounds[a + 1] - 1);
        let src_max_start = (lo - 1).min(n - 1 - extra[a]);
        let mut src = r.gen_range(0..=src_max_start);
        let src_end = src + extra[a];
        let mut tgt = lo;
        edges.push(Edge::new(src as u32, tgt as u32, a as u32));
        let (mut src_steps, mut tgt_steps) = (extra[a], hi - lo);
        while src_steps + tgt_steps > 0 {
            // A target step needs the current source to precede the new
            // target; a source step may not overtake that bound while
            // targets remain.
            let can_src = src_steps > 0 && (tgt_steps == 0 || src < tgt);
            let can_tgt = tgt_steps > 0;
            let take_src = match (can_src, can_tgt) {
                (true, true) => r.gen_range(0..src_steps + tgt_steps) < src_steps,
                (only, _) => only,
            };
            if take_src {
                src += 1;
                src_steps -= 1;
            } else {
                tgt += 1;
                tgt_steps -= 1;
            }
            edges.push(Edge::new(src as u32, tgt as u32, a as u32));
        }
        debug_assert_eq!((src, tgt), (src_end, hi));
    }
    Automaton::new(n, sigma, StateId(0), edges)
}

/// Random reachable input-consistent DFA with a random number of extra edges.
pub fn gen_random_dfa(n: usize, sigma: u32, seed: u64) -> Result<Automaton> {
    let mut r = rng(seed);
    let extra = r.gen_range(0..=n);
    random_dfa(n, sigma, extra, &mut r)
}

/// Random reachable input-consistent DFA with (at most) `m` edges; extra
/// edges that would break determinism are skipped after a bounded number of
/// attempts.
pub fn gen_random_dfa_with_edges(n: usize, m: usize, sigma: u32, seed: u64) -> Result<Automaton> {
    if m + 1 < n {
        return Err(Error::Infeasible(format!("{m} edges cannot reach {n} states")));
    }
    let mut r = rng(seed);
    random_dfa(n, sigma, m + 1 - n, &mut r)
}

fn letters_for(n: usize, sigma: u32, r: &mut ChaCha8Rng) -> (u32, Vec<u32>) {
    // Letters used must be dense: the first states take 0..sigma in order.
    let sigma = sigma.max(1).min((n - 1) as u32);
    let mut label = vec![u32::MAX; n];
    for v in 1..n {
        label[v] = if v <= sigma as usize {
            v as u32 - 1
        } else {
            r.gen_range(0..sigma)
        };
    }
    (sigma, label)
}

fn random_dfa(n: usize, sigma: u32, extra: usize, r: &mut ChaCha8Rng) -> Result<Automaton> {
    if n < 2 {
        return Err(Error::Infeasible("a DFA needs at least two states".into()));
    }
    let (sigma, mut label) = letters_for(n, sigma, r);
    let s = sigma as usize;
    // used[u * s + a]: whether u already has an a-edge.
    let mut used = vec![false; n * s];
    let mut free_slots: Vec<(u32, u32)> = (0..sigma).map(|a| (0, a)).collect();
    let mut edges = Vec::with_capacity(n - 1 + extra);
    for v in 1..n {
        let want = label[v];
        // Try a few random parents with a free `want` slot, else take any
        // free slot and adopt its letter (keeps letters 0..sigma assigned).
        let mut parent = None;
        for _ in 0..8 {
            let u = r.gen_range(0..v);
            if !used[u * s + want as usize] {
                parent = Some(u);
                break;
            }
        }
        let (u, a) = match parent {
            Some(u) => (u, want),
            None if v <= s => {
                // Source slots for the first letters are always free.
                (0, want)
            }
            None => {
                free_slots.retain(|&(u, a)| !used[u as usize * s + a as usize]);
                let i = r.gen_range(0..free_slots.len());
                let (u, a) = free_slots[i];
                (u as usize, a)
            }
        };
        label[v] = a;
        used[u * s + a as usize] = true;
        edges.push(Edge::new(u as u32, v as u32, a));
        free_slots.extend((0..sigma).map(|b| (v as u32, b)));
    }
    let mut attempts = 0;
    let mut added = 0;
    while added < extra && attempts < 20 * extra + 20 {
        attempts += 1;
        let u = r.gen_range(0..n);
        let v = r.gen_range(1..n);
        let a = label[v];
        if !used[u * s + a as usize] {
            used[u * s + a as usize] = true;
            edges.push(Edge::new(u as u32, v as u32, a));
            added += 1;
        }
    }
    Automaton::new(n, sigma, StateId(0), edges)
}

/// Random reachable input-consistent NFA with about `m` edges.
pub fn gen_random_nfa(n: usize, m: usize, sigma: u32, seed: u64) -> Result<Automaton> {
    if n < 2 {
        return Err(Error::Infeasible("an NFA needs at least two states".into()));
    }
    let mut r = rng(seed);
    let (sigma, label) = letters_for(n, sigma, &mut r);
    let mut edges = Vec::with_capacity(m.max(n - 1));
    for v in 1..n {
        let u = if v <= sigma as usize { 0 } else { r.gen_range(0..v) };
        edges.push(Edge::new(u as u32, v as u32, label[v]));
    }
    while edges.len() < m {
        let u = r.gen_range(0..n);
        let v = r.gen_range(1..n);
        edges.push(Edge::new(u as u32, v as u32, label[v]));
    }
    Automaton::with_duplicates(n, sigma, StateId(0), edges).map(|(a, _)| a)
}

/// Renames state `v` to `perm[v]`.
pub fn relabel(a: &Automaton, perm: &[StateId]) -> Automaton {
    let edges = a
        .edges()
        .iter()
        .map(|e| Edge {
            from: perm[e.from.index()],
            to: perm[e.to.index()],
            letter: e.letter,
        })
        .collect();
    let mut b = Automaton::new(a.n(), a.sigma(), perm[a.source().index()], edges).expect("permutation");
    b.set_letter_names(a.letter_names().map(<[String]>::to_vec));
    b
}

/// A seeded random permutation of `0..n`.
pub fn random_permutation(n: usize, seed: u64) -> Vec<StateId> {
    use rand::seq::SliceRandom;
    let mut p: Vec<StateId> = (0..n as u32).map(StateId).collect();
    p.shuffle(&mut rng(seed));
    p
}
