//! Shortest-path sign resolution and unbalanced-cycle detection.
//!
//! Both work on the undirected, unsigned view of the graph: every arc can be
//! traversed in either direction and counts as one hop.

use std::collections::{HashMap, VecDeque};

use super::SamplerError;
use crate::graph::{NodeId, Sign, SignedGraph};

const UNSEEN: u32 = u32::MAX;

/// Reusable BFS state; `dist` and `best` are reset only where touched.
#[derive(Debug, Default)]
pub(crate) struct BfsScratch {
    dist: Vec<u32>,
    best: Vec<u32>,
    touched: Vec<NodeId>,
    queue: VecDeque<NodeId>,
}

impl BfsScratch {
    fn reset(&mut self, n: usize) {
        if self.dist.len() != n {
            self.dist = vec![UNSEEN; n];
            self.best = vec![0; n];
        } else {
            for &v in &self.touched {
                self.dist[v] = UNSEEN;
                self.best[v] = 0;
            }
        }
        self.touched.clear();
        self.queue.clear();
    }

    fn visit(&mut self, v: NodeId, d: u32, best: u32) {
        self.dist[v] = d;
        self.best[v] = best;
        self.touched.push(v);
        self.queue.push_back(v);
    }
}

/// Resolves the sign between `source` and each target: `(-1)^(d - p)` where
/// `d` is the hop distance and `p` the largest number of positive arcs on
/// any shortest path. `None` marks an unreachable target.
///
/// The BFS keeps, per node, the best positive count over the shortest-path
/// DAG, and stops once the layer holding the farthest target is final.
pub(crate) fn resolve_signs(
    graph: &SignedGraph,
    source: NodeId,
    targets: &[NodeId],
    scratch: &mut BfsScratch,
) -> Vec<Option<Sign>> {
    scratch.reset(graph.node_count());
    scratch.visit(source, 0, 0);
    let mut pending = targets.iter().filter(|&&t| t != source).count();
    let mut horizon = u32::MAX;
    while let Some(u) = scratch.queue.pop_front() {
        let du = scratch.dist[u];
        if du >= horizon {
            break;
        }
        let bu = scratch.best[u];
        for (v, s) in graph.undirected_arcs(u) {
            let cand = bu + s.is_positive() as u32;
            let dv = scratch.dist[v];
            if dv == UNSEEN {
                scratch.visit(v, du + 1, cand);
                if targets.contains(&v) {
                    pending -= 1;
                    if pending == 0 {
                        horizon = du + 1;
                    }
                }
            } else if dv == du + 1 && cand > scratch.best[v] {
                scratch.best[v] = cand;
            }
        }
    }
    targets
        .iter()
        .map(|&t| match scratch.dist[t] {
            UNSEEN => None,
            d if (d - scratch.best[t]).is_multiple_of(2) => Some(Sign::Positive),
            _ => Some(Sign::Negative),
        })
        .collect()
}

/// Sign of the relationship between `i` and `u` along the shortest path with
/// the most positive edges.
pub fn resolve_conflict(graph: &SignedGraph, i: NodeId, u: NodeId) -> Result<Sign, SamplerError> {
    let mut scratch = BfsScratch::default();
    resolve_signs(graph, i, &[u], &mut scratch)[0].ok_or(SamplerError::Unreachable { from: i, to: u })
}

type ArcKey = (NodeId, NodeId);

/// Arc used between consecutive path nodes, keyed so that the same edge read
/// from either path maps to the same key.
fn path_arcs(graph: &SignedGraph, path: &[NodeId]) -> Result<Vec<(ArcKey, Sign)>, SamplerError> {
    path.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            if let Some(s) = graph.arc_sign(a, b) {
                let key = if graph.is_directed() { (a, b) } else { (a.min(b), a.max(b)) };
                Ok((key, s))
            } else if let Some(s) = graph.arc_sign(b, a) {
                Ok(((b, a), s))
            } else {
                Err(SamplerError::NotAdjacent { from: a, to: b })
            }
        })
        .collect()
}

/// Whether the union of two `i -> u` paths (walks are accepted) contains a
/// cycle with an odd number of negative edges.
///
/// The union is two-colored so that positive edges join equal colors and
/// negative edges opposite ones; the coloring fails exactly when some cycle
/// is unbalanced.
pub fn detect_unbalanced_cycle(
    graph: &SignedGraph,
    path_a: &[NodeId],
    path_b: &[NodeId],
) -> Result<bool, SamplerError> {
    if path_a.is_empty() || path_b.is_empty() || path_a.first() != path_b.first() || path_a.last() != path_b.last() {
        return Err(SamplerError::InvalidPaths);
    }
    let mut arcs: HashMap<(NodeId, NodeId), Sign> = HashMap::new();
    for (key, s) in path_arcs(graph, path_a)?.into_iter().chain(path_arcs(graph, path_b)?) {
        arcs.insert(key, s);
    }
    let mut adj: HashMap<NodeId, Vec<(NodeId, Sign)>> = HashMap::new();
    for (&(a, b), &s) in &arcs {
        adj.entry(a).or_default().push((b, s));
        adj.entry(b).or_default().push((a, s));
    }
    let mut color: HashMap<NodeId, Sign> = HashMap::new();
    let start = path_a[0];
    color.insert(start, Sign::Positive);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        let cx = color[&x];
        for &(y, s) in adj.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
            let want = cx * s;
            match color.get(&y) {
                Some(&cy) if cy != want => return Ok(true),
                Some(_) => {}
                None => {
                    color.insert(y, want);
                    stack.push(y);
                }
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn g(n: usize, directed: bool, rows: &[(usize, usize, i64)]) -> SignedGraph {
        SignedGraph::from_edges(n, directed, rows.iter().map(|&(a, b, w)| Edge::new(a, b, w))).unwrap()
    }

    #[test]
    fn equal_products_are_balanced() {
        // Square 0-1-3, 0-2-3 with products (+)(-)=- and (-)(+)=-.
        let sq = g(4, false, &[(0, 1, 1), (1, 3, -1), (0, 2, -1), (2, 3, 1)]);
        assert!(!detect_unbalanced_cycle(&sq, &[0, 1, 3], &[0, 2, 3]).unwrap());
    }

    #[test]
    fn triangle_with_one_negative_edge() {
        let t = g(3, false, &[(0, 1, 1), (1, 2, 1), (0, 2, -1)]);
        assert!(detect_unbalanced_cycle(&t, &[0, 1, 2], &[0, 2]).unwrap());
    }

    #[test]
    fn antiparallel_arcs_of_opposite_sign_form_an_unbalanced_cycle() {
        let d = g(2, true, &[(0, 1, 1), (1, 0, -1)]);
        // Path 1 uses 0->1; path 2 walks 0->1 then back over 1->0 and again.
        assert!(detect_unbalanced_cycle(&d, &[0, 1], &[0, 1, 0, 1]).unwrap());
    }

    #[test]
    fn invalid_paths() {
        let t = g(3, false, &[(0, 1, 1), (1, 2, 1)]);
        assert!(matches!(detect_unbalanced_cycle(&t, &[0, 2], &[0, 1, 2]), Err(SamplerError::NotAdjacent { .. })));
        assert!(matches!(detect_unbalanced_cycle(&t, &[0, 1], &[0, 1, 2]), Err(SamplerError::InvalidPaths)));
    }

    #[test]
    fn resolution_follows_direction_free_view() {
        // 0 -> 1 <- 2: 2 is reachable from 0 only ignoring direction.
        let d = g(3, true, &[(0, 1, -1), (2, 1, -1)]);
        assert_eq!(resolve_conflict(&d, 0, 2).unwrap(), Sign::Positive);
        let split = g(4, true, &[(0, 1, 1)]);
        assert!(matches!(resolve_conflict(&split, 0, 3), Err(SamplerError::Unreachable { .. })));
    }

    #[test]
    fn batch_matches_single() {
        let h = g(6, false, &[(0, 1, 1), (1, 2, -1), (0, 3, -1), (3, 2, -1), (2, 4, 1), (4, 5, -1), (3, 5, 1)]);
        let mut scratch = BfsScratch::default();
        let targets = [5, 2, 4, 1];
        let batch = resolve_signs(&h, 0, &targets, &mut scratch);
        for (k, &t) in targets.iter().enumerate() {
            assert_eq!(batch[k], Some(resolve_conflict(&h, 0, t).unwrap()));
        }
        // Scratch reuse gives the same answers from a different source.
        let again = resolve_signs(&h, 5, &[0], &mut scratch);
        assert_eq!(again[0], Some(resolve_conflict(&h, 5, 0).unwrap()));
    }
}
