//! Targeted node sampling.
//!
//! Walk caches are built once per graph. During training, a positive edge
//! `(i, j)` draws examples from the negative side of `i`'s cache and a
//! negative edge from the positive side; when that side is empty the draw
//! falls back to a uniform non-neighbor with the sign opposite the edge.

mod alias;
mod balance;
mod cache;
mod walk;

pub use alias::{build_edge_alias, draw_edge, AliasTable};
pub use balance::{detect_unbalanced_cycle, resolve_conflict};
pub use cache::{build_cache, build_cache_traced, ConflictRecord, NodeCache};
pub use walk::{estimate_walk_signs, random_walk};

use rand::Rng;
use thiserror::Error;

use crate::graph::{NodeId, Sign, SignedGraph};

#[derive(Debug, Error)]
pub enum SamplerError {
    #[error("alias table needs at least one outcome")]
    EmptyTable,
    #[error("weights must be finite, non-negative and not all zero")]
    InvalidWeight,
    #[error("nodes {from} and {to} are not adjacent")]
    NotAdjacent { from: NodeId, to: NodeId },
    #[error("node {to} is unreachable from {from}")]
    Unreachable { from: NodeId, to: NodeId },
    #[error("paths must be nonempty and share both endpoints")]
    InvalidPaths,
    #[error("invalid walk configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkConfig {
    /// Steps per walk; at least 2.
    pub walk_length: usize,
    pub walks_per_node: usize,
    pub seed: u64,
    /// Worker threads for cache construction. Results do not depend on it.
    pub threads: usize,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig { walk_length: 50, walks_per_node: 1, seed: 0, threads: 1 }
    }
}

impl WalkConfig {
    pub fn validate(&self) -> Result<(), SamplerError> {
        if self.walk_length < 2 {
            return Err(SamplerError::InvalidConfig(format!(
                "walk length must be at least 2, got {}",
                self.walk_length
            )));
        }
        if self.walks_per_node == 0 {
            return Err(SamplerError::InvalidConfig("walks per node must be positive".into()));
        }
        Ok(())
    }
}

/// One example drawn for an edge: a node, the sign it is trained with, and
/// whether it came from the uniform fallback rather than the cache.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TargetedSample {
    pub node: NodeId,
    pub sign: Sign,
    pub fallback: bool,
}

/// Uniform draw over nodes other than `i` and its successors; `None` when no
/// such node exists.
#[inline]
pub fn uniform_non_neighbor<R: Rng + ?Sized>(graph: &SignedGraph, i: NodeId, rng: &mut R) -> Option<NodeId> {
    let n = graph.node_count();
    if graph.out_degree(i) + 1 >= n {
        return None;
    }
    loop {
        let u = rng.gen_range(0..n);
        if u != i && !graph.is_out_neighbor(i, u) {
            return Some(u);
        }
    }
}

/// Appends `count` draws for an edge of sign `edge_sign` leaving `i`.
pub fn sample_targeted_into<R: Rng + ?Sized>(
    cache: &NodeCache,
    graph: &SignedGraph,
    i: NodeId,
    edge_sign: Sign,
    count: usize,
    rng: &mut R,
    out: &mut Vec<TargetedSample>,
) {
    let wanted = -edge_sign;
    let side = cache.side(i, wanted);
    for _ in 0..count {
        if side.is_empty() {
            match uniform_non_neighbor(graph, i, rng) {
                Some(node) => out.push(TargetedSample { node, sign: wanted, fallback: true }),
                None => return,
            }
        } else {
            let node = side[rng.gen_range(0..side.len())];
            out.push(TargetedSample { node, sign: wanted, fallback: false });
        }
    }
}

/// `count` draws uniformly with replacement from the cache side opposite to
/// `edge_sign`. Fewer are returned only if the fallback has no candidates.
pub fn sample_targeted<R: Rng + ?Sized>(
    cache: &NodeCache,
    graph: &SignedGraph,
    i: NodeId,
    edge_sign: Sign,
    count: usize,
    rng: &mut R,
) -> Vec<TargetedSample> {
    let mut out = Vec::with_capacity(count);
    sample_targeted_into(cache, graph, i, edge_sign, count, rng, &mut out);
    out
}
