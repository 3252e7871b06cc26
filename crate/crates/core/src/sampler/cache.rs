//! Per-node positive/negative example caches.

use std::io::Write;
use std::time::{Duration, Instant};

use super::balance::{resolve_signs, BfsScratch};
use super::walk::walk_with_signs;
use super::{SamplerError, WalkConfig};
use crate::graph::{NodeId, Sign, SignedGraph};
use crate::rng::{self, Stream};

/// Nodes that balance theory predicts to be friends (`positives`) or enemies
/// (`negatives`) of each node, excluding the node itself and its direct
/// successors. Each side is stored in CSR layout for O(1) uniform draws.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NodeCache {
    pos_offsets: Vec<usize>,
    pos_nodes: Vec<NodeId>,
    neg_offsets: Vec<usize>,
    neg_nodes: Vec<NodeId>,
    conflicts: usize,
    build_time: Duration,
}

impl NodeCache {
    /// Builds a cache from explicit per-node lists.
    pub fn from_lists(positives: Vec<Vec<NodeId>>, negatives: Vec<Vec<NodeId>>) -> Self {
        assert_eq!(positives.len(), negatives.len());
        let flatten = |lists: Vec<Vec<NodeId>>| {
            let mut offsets = Vec::with_capacity(lists.len() + 1);
            offsets.push(0);
            let mut nodes = Vec::new();
            for l in lists {
                nodes.extend(l);
                offsets.push(nodes.len());
            }
            (offsets, nodes)
        };
        let (pos_offsets, pos_nodes) = flatten(positives);
        let (neg_offsets, neg_nodes) = flatten(negatives);
        NodeCache { pos_offsets, pos_nodes, neg_offsets, neg_nodes, conflicts: 0, build_time: Duration::ZERO }
    }

    pub fn node_count(&self) -> usize {
        self.pos_offsets.len().saturating_sub(1)
    }

    #[inline]
    pub fn positives(&self, node: NodeId) -> &[NodeId] {
        &self.pos_nodes[self.pos_offsets[node]..self.pos_offsets[node + 1]]
    }

    #[inline]
    pub fn negatives(&self, node: NodeId) -> &[NodeId] {
        &self.neg_nodes[self.neg_offsets[node]..self.neg_offsets[node + 1]]
    }

    /// Side holding nodes whose estimated sign is `sign`.
    #[inline]
    pub fn side(&self, node: NodeId, sign: Sign) -> &[NodeId] {
        match sign {
            Sign::Positive => self.positives(node),
            Sign::Negative => self.negatives(node),
        }
    }

    /// Number of (node, target) pairs observed with both signs.
    pub fn conflict_count(&self) -> usize {
        self.conflicts
    }

    pub fn total_entries(&self) -> usize {
        self.pos_nodes.len() + self.neg_nodes.len()
    }

    pub fn build_time(&self) -> Duration {
        self.build_time
    }

    /// Debug dump: `i [+] u1 u2 ... [-] w1 w2 ...` per node.
    pub fn write_dump<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for i in 0..self.node_count() {
            write!(out, "{i} [+]")?;
            for u in self.positives(i) {
                write!(out, " {u}")?;
            }
            write!(out, " [-]")?;
            for u in self.negatives(i) {
                write!(out, " {u}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// A target reached from `node` with both signs, with one witnessing walk
/// per sign (both start at `node` and end at `target`).
#[derive(Debug, Clone, PartialEq)]
pub struct ConflictRecord {
    pub node: NodeId,
    pub target: NodeId,
    pub positive_walk: Vec<NodeId>,
    pub negative_walk: Vec<NodeId>,
    pub resolved: Sign,
}

struct NodeEntries {
    positives: Vec<NodeId>,
    negatives: Vec<NodeId>,
    conflicts: Vec<ConflictRecord>,
    conflict_count: usize,
}

fn collect_node(
    graph: &SignedGraph,
    cfg: &WalkConfig,
    i: NodeId,
    trace: bool,
    scratch: &mut BfsScratch,
) -> NodeEntries {
    let mut seen: Vec<(NodeId, Sign, usize, usize)> = Vec::new();
    let mut walks: Vec<Vec<NodeId>> = Vec::new();
    let (mut nodes, mut signs) = (Vec::with_capacity(cfg.walk_length), Vec::with_capacity(cfg.walk_length));
    for w in 0..cfg.walks_per_node {
        let mut rng = rng::stream(cfg.seed, Stream::Walks, (i * cfg.walks_per_node + w) as u64);
        walk_with_signs(graph, i, cfg.walk_length, &mut rng, &mut nodes, &mut signs);
        for (p, (&u, &s)) in nodes.iter().zip(&signs).enumerate() {
            if u != i && !graph.is_out_neighbor(i, u) {
                seen.push((u, s, walks.len(), p));
            }
        }
        if trace {
            walks.push(nodes.clone());
        }
    }
    // Stable sort keeps the first witness of each (u, sign) at the front.
    seen.sort_by_key(|&(u, s, _, _)| (u, s));
    seen.dedup_by_key(|&mut (u, s, _, _)| (u, s));

    let mut positives = Vec::new();
    let mut negatives = Vec::new();
    let mut contested = Vec::new();
    let mut k = 0;
    while k < seen.len() {
        let (u, s, _, _) = seen[k];
        if k + 1 < seen.len() && seen[k + 1].0 == u {
            contested.push(k);
            k += 2;
            continue;
        }
        match s {
            Sign::Positive => positives.push(u),
            Sign::Negative => negatives.push(u),
        }
        k += 1;
    }

    let mut conflicts = Vec::new();
    if !contested.is_empty() {
        let targets: Vec<NodeId> = contested.iter().map(|&k| seen[k].0).collect();
        let resolved = resolve_signs(graph, i, &targets, scratch);
        for (&k, sign) in contested.iter().zip(resolved) {
            // A walk reached the target, so it is connected.
            let sign = sign.expect("walk-reached node is connected");
            let u = seen[k].0;
            match sign {
                Sign::Positive => positives.push(u),
                Sign::Negative => negatives.push(u),
            }
            if trace {
                // seen[k] is the negative entry, seen[k + 1] the positive one.
                let witness = |(_, _, walk, pos): (NodeId, Sign, usize, usize)| {
                    std::iter::once(i).chain(walks[walk][..=pos].iter().copied()).collect()
                };
                conflicts.push(ConflictRecord {
                    node: i,
                    target: u,
                    positive_walk: witness(seen[k + 1]),
                    negative_walk: witness(seen[k]),
                    resolved: sign,
                });
            }
        }
        positives.sort_unstable();
        negatives.sort_unstable();
    }
    NodeEntries { positives, negatives, conflicts, conflict_count: contested.len() }
}

fn build(graph: &SignedGraph, cfg: &WalkConfig, trace: bool) -> Result<(NodeCache, Vec<ConflictRecord>), SamplerError> {
    cfg.validate()?;
    let started = Instant::now();
    let n = graph.node_count();
    let threads = cfg.threads.clamp(1, n.max(1));
    let chunk = n.div_ceil(threads).max(1);
    let parts: Vec<Vec<NodeEntries>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..n)
            .step_by(chunk)
            .map(|lo| {
                scope.spawn(move || {
                    let mut scratch = BfsScratch::default();
                    (lo..(lo + chunk).min(n))
                        .map(|i| collect_node(graph, cfg, i, trace, &mut scratch))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("cache worker panicked")).collect()
    });

    let mut positives = Vec::with_capacity(n);
    let mut negatives = Vec::with_capacity(n);
    let mut records = Vec::new();
    let mut conflicts = 0;
    for entry in parts.into_iter().flatten() {
        positives.push(entry.positives);
        negatives.push(entry.negatives);
        records.extend(entry.conflicts);
        conflicts += entry.conflict_count;
    }
    let mut cache = NodeCache::from_lists(positives, negatives);
    cache.conflicts = conflicts;
    cache.build_time = started.elapsed();
    Ok((cache, records))
}

/// Runs `walks_per_node` walks from every node and files each visited
/// non-neighbor under the sign estimated along the walk. Targets seen with
/// both signs are settled by [`resolve_conflict`](super::resolve_conflict).
///
/// Deterministic per seed regardless of `threads`: node `i`'s walks use
/// their own random stream.
pub fn build_cache(graph: &SignedGraph, cfg: &WalkConfig) -> Result<NodeCache, SamplerError> {
    build(graph, cfg, false).map(|(cache, _)| cache)
}

/// [`build_cache`] that also returns every conflict with its witnessing walks.
pub fn build_cache_traced(
    graph: &SignedGraph,
    cfg: &WalkConfig,
) -> Result<(NodeCache, Vec<ConflictRecord>), SamplerError> {
    build(graph, cfg, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn g(n: usize, directed: bool, rows: &[(usize, usize, i64)]) -> SignedGraph {
        SignedGraph::from_edges(n, directed, rows.iter().map(|&(a, b, w)| Edge::new(a, b, w))).unwrap()
    }

    fn cfg(len: usize, walks: usize, seed: u64) -> WalkConfig {
        WalkConfig { walk_length: len, walks_per_node: walks, seed, threads: 1 }
    }

    #[test]
    fn directed_chain_fills_both_sides() {
        // i=0 -> j=1 (+) -> k=2 (+) -> z=3 (-): only one walk exists.
        let chain = g(4, true, &[(0, 1, 1), (1, 2, 1), (2, 3, -1)]);
        let cache = build_cache(&chain, &cfg(3, 1, 0)).unwrap();
        assert_eq!(cache.positives(0), &[2]);
        assert_eq!(cache.negatives(0), &[3]);
        assert_eq!(cache.conflict_count(), 0);
    }

    #[test]
    fn triangle_neighbors_are_excluded() {
        let tri = g(3, false, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]);
        let cache = build_cache(&tri, &cfg(50, 3, 1)).unwrap();
        assert!(cache.positives(0).is_empty() && cache.negatives(0).is_empty());
    }

    #[test]
    fn dump_format() {
        let chain = g(4, true, &[(0, 1, 1), (1, 2, 1), (2, 3, -1)]);
        let cache = build_cache(&chain, &cfg(3, 1, 0)).unwrap();
        let mut out = Vec::new();
        cache.write_dump(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().next().unwrap(), "0 [+] 2 [-] 3");
        assert_eq!(text.lines().nth(1).unwrap(), "1 [+] [-] 3");
        assert_eq!(text.lines().count(), 4);
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let ring =
            g(12, false, &(0..12).map(|i| (i, (i + 1) % 12, if i % 5 == 0 { -1 } else { 1 })).collect::<Vec<_>>());
        let one = build_cache(&ring, &cfg(20, 2, 9)).unwrap();
        let four = build_cache(&ring, &WalkConfig { threads: 4, ..cfg(20, 2, 9) }).unwrap();
        assert_eq!(one.pos_nodes, four.pos_nodes);
        assert_eq!(one.neg_nodes, four.neg_nodes);
    }

    #[test]
    fn odd_ring_produces_resolved_conflicts() {
        // A 5-cycle with one negative edge is unbalanced.
        let ring = g(5, false, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 0, -1)]);
        let (cache, records) = build_cache_traced(&ring, &cfg(50, 4, 2)).unwrap();
        assert!(cache.conflict_count() > 0);
        assert_eq!(records.len(), cache.conflict_count());
        for r in &records {
            // Shortest path from 0 to 2 is 0-1-2 (++), from 0 to 3 is 0-4-3 (-+).
            let expect = resolve_signs(&ring, r.node, &[r.target], &mut BfsScratch::default())[0].unwrap();
            assert_eq!(r.resolved, expect);
            assert!(cache.side(r.node, expect).contains(&r.target));
            assert!(!cache.side(r.node, -expect).contains(&r.target));
        }
    }

    #[test]
    fn rejects_short_walks() {
        let tri = g(3, false, &[(0, 1, 1)]);
        assert!(build_cache(&tri, &cfg(1, 1, 0)).is_err());
        assert!(build_cache(&tri, &cfg(5, 0, 0)).is_err());
    }
}
