//! Scaling measurements for the refinement engines.

use std::fmt::Write as _;
use std::time::Instant;

use crate::automaton::Automaton;
use crate::error::Result;
use crate::gen::{gen_random_dfa_with_edges, gen_wheeler_nfa};
use crate::partition::RefineStats;
use crate::prune::{refine_with_pruning, Direction};
use crate::refine::{refine_all_with, RefineOptions};

pub const CSV_HEADER: &str = "n,m,op,median_ms,max_splitters";

/// Alphabet size of the generated benchmark instances.
pub const BENCH_SIGMA: u32 = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub op: &'static str,
    pub median_ms: f64,
    pub max_splitters: u32,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.total_cmp(b));
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        (xs[k / 2 - 1] + xs[k / 2]) / 2.0
    }
}

/// Median over `trials` runs, each on a fresh instance built from `seed + t`,
/// plus one untimed warm-up run so page faults and allocator growth are not
/// measured. Also returns the mean edge count.
fn time<G, F>(trials: usize, seed: u64, mut gen: G, mut f: F) -> Result<(usize, f64, u32)>
where
    G: FnMut(u64) -> Result<Automaton>,
    F: FnMut(&Automaton) -> Result<RefineStats>,
{
    let trials = trials.max(1);
    let mut times = Vec::with_capacity(trials);
    let mut a = gen(seed)?;
    let mut max_splitters = f(&a)?.max_splitters_per_state;
    let mut edges = 0;
    for t in 0..trials as u64 {
        if t > 0 {
            a = gen(seed.wrapping_add(t))?;
        }
        let start = Instant::now();
        let stats = f(&a)?;
        times.push(start.elapsed().as_secs_f64() * 1e3);
        max_splitters = max_splitters.max(stats.max_splitters_per_state);
        edges += a.num_edges();
    }
    Ok((edges / trials, median(times), max_splitters))
}

/// Per size: `refine_all` on Wheeler NFAs with `3(n-1)` edges, and both
/// pruned refinements on random DFAs with about `3n` edges.
pub fn bench_scaling(sizes: &[usize], trials: usize, seed: u64) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &n in sizes {
        let (m, ms, spl) = time(
            trials,
            seed,
            |s| gen_wheeler_nfa(n, 3 * (n - 1), BENCH_SIGMA, s),
            |a| refine_all_with(a, RefineOptions::default()).map(|(_, st)| st),
        )?;
        rows.push(BenchRow {
            n,
            m,
            op: "refine_all",
            median_ms: ms,
            max_splitters: spl,
        });
        for (dir, op) in [(Direction::Inf, "prune_inf"), (Direction::Sup, "prune_sup")] {
            let (m, ms, spl) = time(
                trials,
                seed,
                |s| gen_random_dfa_with_edges(n, 3 * n, BENCH_SIGMA, s),
                |a| refine_with_pruning(a, dir).map(|o| o.stats),
            )?;
            rows.push(BenchRow {
                n,
                m,
                op,
                median_ms: ms,
                max_splitters: spl,
            });
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut s = String::new();
    writeln!(s, "{CSV_HEADER}").unwrap();
    for r in rows {
        writeln!(s, "{},{},{},{:.3},{}", r.n, r.m, r.op, r.median_ms, r.max_splitters).unwrap();
    }
    s
}
