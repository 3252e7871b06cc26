//! Experiment transforms: edge splits and out-edge removal.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;

use super::{Edge, GraphError, NodeId, SignedGraph};
use crate::rng::{self, Stream};

fn check_fraction(f: f64) -> Result<(), GraphError> {
    if f > 0.0 && f < 1.0 {
        Ok(())
    } else {
        Err(GraphError::InvalidParameter(format!("fraction {f} must lie in (0, 1)")))
    }
}

/// Uniformly random edge partition. The training graph keeps every node,
/// including ones left isolated; `round(train_fraction * m)` edges go to it.
pub fn split_edges(
    graph: &SignedGraph,
    train_fraction: f64,
    seed: u64,
) -> Result<(SignedGraph, Vec<Edge>), GraphError> {
    check_fraction(train_fraction)?;
    if graph.edge_count() == 0 {
        return Err(GraphError::Empty);
    }
    let mut order: Vec<usize> = (0..graph.edge_count()).collect();
    order.shuffle(&mut rng::stream(seed, Stream::Split, 0));
    let cut = (train_fraction * graph.edge_count() as f64).round() as usize;
    let (train_idx, test_idx) = order.split_at(cut);
    let mut train_idx = train_idx.to_vec();
    train_idx.sort_unstable();
    let edges = graph.edges();
    let train = train_idx.iter().map(|&k| edges[k]).collect();
    let test = test_idx.iter().map(|&k| edges[k]).collect();
    Ok((SignedGraph::from_validated(graph.node_count(), graph.is_directed(), train), test))
}

/// Removes every out-edge of `round(fraction * n)` randomly chosen nodes,
/// returning the reduced graph and the chosen (test) nodes.
pub fn remove_outgoing(
    graph: &SignedGraph,
    test_node_fraction: f64,
    seed: u64,
) -> Result<(SignedGraph, BTreeSet<NodeId>), GraphError> {
    if !graph.is_directed() {
        return Err(GraphError::NotDirected);
    }
    check_fraction(test_node_fraction)?;
    let mut nodes: Vec<NodeId> = (0..graph.node_count()).collect();
    nodes.shuffle(&mut rng::stream(seed, Stream::Split, 1));
    let take = (test_node_fraction * graph.node_count() as f64).round() as usize;
    let test: BTreeSet<NodeId> = nodes.into_iter().take(take).collect();
    let kept = graph.edges().iter().filter(|e| !test.contains(&e.src)).copied().collect();
    Ok((SignedGraph::from_validated(graph.node_count(), true, kept), test))
}
