//! Walk caches on a small graph with one unbalanced cycle.
//!
//! Node 0 reaches node 3 by a short all-positive path and by a longer path
//! through a negative edge, and reaches node 7 by two shortest paths of
//! opposite sign. The walks see both signs; the printout shows where each
//! contested node ends up and confirms the witness walks close an
//! unbalanced cycle.
//!
//!     cargo run --example cache_inspection

use signet::graph::{Edge, SignedGraph};
use signet::sampler::{build_cache_traced, detect_unbalanced_cycle, resolve_conflict, WalkConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rows = [
        (0, 1, 1),
        (1, 2, 1),
        (2, 3, 1),
        (0, 4, 1),
        (4, 5, 1),
        (5, 6, -1),
        (6, 3, 1),
        (6, 7, 1),
        (0, 8, -1),
        (8, 9, -1),
        (9, 10, 1),
        (10, 7, 1),
    ];
    let graph = SignedGraph::from_edges(11, false, rows.iter().map(|&(a, b, w)| Edge::new(a, b, w)))?;
    let cfg = WalkConfig { walk_length: 12, walks_per_node: 20, seed: 3, threads: 1 };
    let (cache, conflicts) = build_cache_traced(&graph, &cfg)?;

    println!("cache of node 0: + {:?}  - {:?}", cache.positives(0), cache.negatives(0));
    for target in [3, 7] {
        println!("shortest-path sign 0 -> {target}: {}", resolve_conflict(&graph, 0, target)?);
    }
    for c in conflicts.iter().filter(|c| c.node == 0).take(4) {
        let unbalanced = detect_unbalanced_cycle(&graph, &c.positive_walk, &c.negative_walk)?;
        println!(
            "conflict on {}: resolved {}, witnesses {:?} / {:?}, unbalanced cycle {unbalanced}",
            c.target, c.resolved, c.positive_walk, c.negative_walk
        );
    }
    println!("{} conflicts over all nodes", cache.conflict_count());
    println!("\nfull dump:");
    cache.write_dump(std::io::stdout().lock())?;
    Ok(())
}
