use std::collections::BTreeSet;

use proptest::prelude::*;
use signet::graph::{Edge, Sign, SignedGraph};
use signet::sampler::{build_cache, build_cache_traced, detect_unbalanced_cycle, WalkConfig};

fn graph_strategy(max_nodes: usize, balanced: bool) -> impl Strategy<Value = SignedGraph> {
    (3..=max_nodes, any::<bool>()).prop_flat_map(move |(n, directed)| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let m = pairs.len();
        // Per pair: kept (30%), positive, reversed.
        let choices = prop::collection::vec((0u8..10, any::<bool>(), any::<bool>()), m);
        let sides = prop::collection::vec(any::<bool>(), n);
        (choices, sides).prop_map(move |(choices, side)| {
            let edges: Vec<Edge> = pairs
                .iter()
                .zip(&choices)
                .filter(|(_, c)| c.0 < 3)
                .map(|(&(a, b), &(_, positive, reversed))| {
                    let same = if balanced { side[a] == side[b] } else { positive };
                    let (s, t) = if directed && reversed { (b, a) } else { (a, b) };
                    Edge::new(s, t, if same { 1 } else { -1 })
                })
                .collect();
            SignedGraph::from_edges(n, directed, edges).unwrap()
        })
    })
}

/// Signs with which `to` can be reached from `from` by a walk of 1..=len
/// out-arcs.
fn walk_signs(g: &SignedGraph, from: usize, len: usize) -> Vec<BTreeSet<Sign>> {
    let n = g.node_count();
    let mut found = vec![BTreeSet::new(); n];
    let mut frontier: BTreeSet<(usize, Sign)> = [(from, Sign::Positive)].into();
    for _ in 0..len {
        let mut next = BTreeSet::new();
        for &(v, s) in &frontier {
            for (&u, &t) in g.out_neighbors(v).iter().zip(g.out_signs(v)) {
                next.insert((u, s * t));
            }
        }
        for &(u, s) in &next {
            found[u].insert(s);
        }
        frontier = next;
    }
    found
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cache_entries_are_backed_by_walks(g in graph_strategy(30, false), seed in 0u64..1000) {
        let len = 8;
        let (cache, conflicts) = build_cache_traced(&g, &WalkConfig { walk_length: len, walks_per_node: 2, seed, threads: 1 }).unwrap();
        let contested: BTreeSet<(usize, usize)> = conflicts.iter().map(|c| (c.node, c.target)).collect();
        for i in 0..g.node_count() {
            let reach = walk_signs(&g, i, len);
            for (side, sign) in [(cache.positives(i), Sign::Positive), (cache.negatives(i), Sign::Negative)] {
                for &u in side {
                    prop_assert!(u != i && !g.is_out_neighbor(i, u));
                    if !contested.contains(&(i, u)) {
                        prop_assert!(reach[u].contains(&sign), "node {} entry {} {}", i, u, sign);
                    }
                }
            }
            let pos: BTreeSet<_> = cache.positives(i).iter().collect();
            prop_assert!(cache.negatives(i).iter().all(|u| !pos.contains(u)));
        }
    }

    #[test]
    fn balanced_graphs_never_conflict(g in graph_strategy(20, true), seed in 0u64..1000) {
        let cache = build_cache(&g, &WalkConfig { walk_length: 15, walks_per_node: 3, seed, threads: 1 }).unwrap();
        prop_assert_eq!(cache.conflict_count(), 0);
    }

    #[test]
    fn every_conflict_has_an_unbalanced_witness(g in graph_strategy(20, false), seed in 0u64..1000) {
        let (_, records) = build_cache_traced(&g, &WalkConfig { walk_length: 10, walks_per_node: 3, seed, threads: 1 }).unwrap();
        for r in records {
            prop_assert_eq!(r.positive_walk.first(), Some(&r.node));
            prop_assert_eq!(r.positive_walk.last(), Some(&r.target));
            prop_assert!(detect_unbalanced_cycle(&g, &r.positive_walk, &r.negative_walk).unwrap());
        }
    }
}

#[test]
fn thread_count_does_not_change_caches() {
    let edges = (0..200).map(|k| Edge::new(k % 50, (k * 7 + 3) % 50, if k % 3 == 0 { -1 } else { 1 }));
    let edges: Vec<Edge> = edges.filter(|e| e.src != e.dst).collect::<Vec<_>>();
    let mut seen = BTreeSet::new();
    let edges: Vec<Edge> = edges.into_iter().filter(|e| seen.insert((e.src.min(e.dst), e.src.max(e.dst)))).collect();
    let g = SignedGraph::from_edges(50, false, edges).unwrap();
    let one = build_cache(&g, &WalkConfig { threads: 1, ..WalkConfig::default() }).unwrap();
    let four = build_cache(&g, &WalkConfig { threads: 4, ..WalkConfig::default() }).unwrap();
    let dump = |c: &signet::sampler::NodeCache| {
        let mut b = Vec::new();
        c.write_dump(&mut b).unwrap();
        b
    };
    assert_eq!(dump(&one), dump(&four));
}
