//! Uniform random walks and sign propagation along them.

use rand::Rng;

use super::SamplerError;
use crate::graph::{NodeId, Sign, SignedGraph};

/// Walk of at most `length` successors of `start`, each step uniform over
/// out-neighbors. Stops early at a node without successors; a sink start
/// yields an empty walk.
pub fn random_walk<R: Rng + ?Sized>(graph: &SignedGraph, start: NodeId, length: usize, rng: &mut R) -> Vec<NodeId> {
    let mut nodes = Vec::with_capacity(length);
    let mut signs = Vec::with_capacity(length);
    walk_with_signs(graph, start, length, rng, &mut nodes, &mut signs);
    nodes
}

/// Walk that records, for each position, the product of edge signs from
/// `start`. Buffers are cleared first.
pub(crate) fn walk_with_signs<R: Rng + ?Sized>(
    graph: &SignedGraph,
    start: NodeId,
    length: usize,
    rng: &mut R,
    nodes: &mut Vec<NodeId>,
    signs: &mut Vec<Sign>,
) {
    nodes.clear();
    signs.clear();
    let mut at = start;
    let mut acc = Sign::Positive;
    for _ in 0..length {
        let next = graph.out_neighbors(at);
        if next.is_empty() {
            break;
        }
        let k = rng.gen_range(0..next.len());
        acc = acc * graph.out_signs(at)[k];
        at = next[k];
        nodes.push(at);
        signs.push(acc);
    }
}

/// Estimated sign between `start` and each walk position: the running
/// product of arc signs. Position 0 is the sign of the first arc itself.
pub fn estimate_walk_signs(graph: &SignedGraph, start: NodeId, walk: &[NodeId]) -> Result<Vec<Sign>, SamplerError> {
    let mut prev = start;
    let mut acc = Sign::Positive;
    walk.iter()
        .map(|&next| {
            let s = graph.arc_sign(prev, next).ok_or(SamplerError::NotAdjacent { from: prev, to: next })?;
            acc = acc * s;
            prev = next;
            Ok(acc)
        })
        .collect()
}
