use proptest::prelude::*;
use wheelsort::automaton::{canonical_parts, Automaton, StateId};
use wheelsort::gen::{gen_random_nfa, gen_wheeler_nfa, random_permutation, relabel};
use wheelsort::oracle::{
    bisimilarity_partition, check_wheeler_order, enumerate_wheeler_orders, is_forward_stable,
    naive_coarsest_forward_stable, naive_ordered_refinement, reaching_strings,
};
use wheelsort::partition::{InitialOrder, PruneMode};
use wheelsort::refine::{refine_all, refine_all_with, wheeler_preorder, RefineOptions};

fn small_nfa(seed: u64) -> Automaton {
    let n = 2 + seed as usize % 11;
    let m = n - 1 + (seed % (2 * n as u64 + 1)) as usize;
    gen_random_nfa(n, m, 1 + (seed % 3) as u32, seed).unwrap()
}

#[test]
fn unordered_parts_match_both_oracles() {
    for seed in 0..400 {
        let a = small_nfa(seed);
        let p = refine_all(&a).unwrap();
        let naive = naive_coarsest_forward_stable(&a);
        assert_eq!(p.unordered(), naive, "seed {seed}");
        assert_eq!(bisimilarity_partition(&a.reversed()), naive, "seed {seed}");
    }
}

#[test]
fn order_matches_literal_trace() {
    for seed in 0..400 {
        let a = small_nfa(seed);
        let (trace, _) = naive_ordered_refinement(&a, InitialOrder::Ascending, PruneMode::Off);
        assert_eq!(refine_all(&a).unwrap(), trace, "seed {seed}");
    }
}

#[test]
fn parts_share_truncated_languages() {
    for seed in 0..200 {
        let n = 2 + seed as usize % 6;
        let a = gen_random_nfa(n, n + 2, 2, seed).unwrap();
        let strings = reaching_strings(&a, 2 * n);
        for part in refine_all(&a).unwrap().parts() {
            for w in part.windows(2) {
                assert_eq!(strings[w[0].index()], strings[w[1].index()], "seed {seed}");
            }
        }
    }
}

#[test]
fn invariant_scans_pass() {
    for seed in 0..150 {
        let a = small_nfa(seed);
        let (_, stats) = refine_all_with(&a, RefineOptions { check_invariants: true }).unwrap();
        assert!(stats.max_splitters_per_state <= (a.n() as f64).log2().floor() as u32 + 1);
    }
}

#[test]
fn wheeler_inputs_respect_planted_order() {
    for seed in 0..60u64 {
        let sigma = 1 + (seed % 4) as u32;
        let n = 200 + 37 * seed as usize;
        let m = (2 * n).min((sigma as usize + 1) * (n - 1));
        let planted = gen_wheeler_nfa(n, m, sigma, seed).unwrap();
        let perm = random_permutation(n, seed ^ 0x5eed);
        let a = relabel(&planted, &perm);
        let w = wheeler_preorder(&a).unwrap();
        assert!(w.quasi_wheeler, "seed {seed}");
        // perm[v] is the new name of planted state v, so the planted
        // position of new state perm[v] is v.
        let mut planted_pos = vec![0usize; n];
        for (v, q) in perm.iter().enumerate() {
            planted_pos[q.index()] = v;
        }
        let idx = w.partition.part_index();
        for u in a.states() {
            for v in a.states() {
                if idx[u.index()] < idx[v.index()] {
                    assert!(planted_pos[u.index()] < planted_pos[v.index()], "seed {seed}");
                }
            }
        }
    }
}

#[test]
fn order_agrees_with_every_wheeler_order_of_tiny_quotients() {
    let mut checked = 0;
    for seed in 0..600 {
        let n = 2 + seed as usize % 6;
        let a = gen_random_nfa(n, n + seed as usize % 4, 1 + (seed % 2) as u32, seed).unwrap();
        let w = wheeler_preorder(&a).unwrap();
        let q = &w.quotient.automaton;
        let orders = enumerate_wheeler_orders(q);
        assert_eq!(w.quasi_wheeler, !orders.is_empty(), "seed {seed}");
        let identity: Vec<StateId> = q.states().collect();
        for o in &orders {
            assert_eq!(o, &identity, "seed {seed}");
            checked += 1;
        }
    }
    assert!(checked > 100);
}

#[test]
fn quotient_of_wheeler_preorder_is_checked_on_output_order() {
    let a = gen_wheeler_nfa(500, 1200, 3, 9).unwrap();
    let w = wheeler_preorder(&a).unwrap();
    let order: Vec<StateId> = w.quotient.automaton.states().collect();
    assert_eq!(check_wheeler_order(&w.quotient.automaton, &order).unwrap(), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn output_is_coarsest_forward_stable(seed in 0u64..1_000_000) {
        let a = small_nfa(seed);
        let p = refine_all(&a).unwrap();
        prop_assert!(is_forward_stable(&a, p.parts()));
        prop_assert_eq!(p.unordered(), naive_coarsest_forward_stable(&a));
    }

    #[test]
    fn relabeling_commutes_with_refinement(seed in 0u64..1_000_000) {
        let a = small_nfa(seed);
        let perm = random_permutation(a.n(), seed.rotate_left(7));
        let b = relabel(&a, &perm);
        let mapped: Vec<Vec<StateId>> = refine_all(&a)
            .unwrap()
            .parts()
            .iter()
            .map(|p| p.iter().map(|v| perm[v.index()]).collect())
            .collect();
        prop_assert_eq!(canonical_parts(mapped), refine_all(&b).unwrap().unordered());
    }

    #[test]
    fn refinement_is_deterministic(seed in 0u64..1_000_000) {
        let a = small_nfa(seed);
        prop_assert_eq!(refine_all(&a).unwrap(), refine_all(&a).unwrap());
    }
}
