//! Signed network data model.
//!
//! A [`SignedGraph`] stores every edge once, in input order, and builds a
//! compressed sparse-row index over it. Directed graphs get both an out- and
//! an in-adjacency; undirected graphs expose each edge from both endpoints
//! through a single adjacency.

mod generate;
mod io;
mod transform;

pub use generate::{generate_er_signed, two_community, ErConfig, TwoCommunityConfig};
pub use io::{load_edge_list, load_edge_list_remapped, load_labels, write_edge_list, write_labels, IdMap, NodeLabels};
pub use transform::{remove_outgoing, split_edges};

use std::fmt;
use std::ops::{Mul, Neg};

use thiserror::Error;

/// Dense node index.
pub type NodeId = usize;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: zero weight")]
    ZeroWeightLine { line: usize },
    #[error("zero weight")]
    ZeroWeight,
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("duplicate edge {src} -> {dst}")]
    DuplicateEdge { src: NodeId, dst: NodeId },
    #[error("undirected edge {src} -- {dst} listed twice with different weights")]
    InconsistentUndirected { src: NodeId, dst: NodeId },
    #[error("node {node} out of range for {node_count} nodes")]
    NodeOutOfRange { node: NodeId, node_count: usize },
    #[error("graph has no edges")]
    Empty,
    #[error("operation requires a directed graph")]
    NotDirected,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("label for unknown node {0}")]
    UnknownLabelNode(u64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Edge polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Positive,
}

impl Sign {
    pub fn of(w: i64) -> Option<Sign> {
        match w.signum() {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            _ => None,
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }

    #[inline]
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self == Sign::Positive
    }
}

impl Mul for Sign {
    type Output = Sign;

    #[inline]
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    #[inline]
    fn neg(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_positive() { "+" } else { "-" })
    }
}

/// Splits a nonzero weight into magnitude and sign, `w = r * s`.
pub fn decompose_weight(w: i64) -> Result<(u64, Sign), GraphError> {
    let sign = Sign::of(w).ok_or(GraphError::ZeroWeight)?;
    Ok((w.unsigned_abs(), sign))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub src: NodeId,
    pub dst: NodeId,
    pub weight: i64,
}

impl Edge {
    pub fn new(src: NodeId, dst: NodeId, weight: i64) -> Self {
        Edge { src, dst, weight }
    }

    /// Magnitude `r = |w|`.
    #[inline]
    pub fn magnitude(&self) -> u64 {
        self.weight.unsigned_abs()
    }

    /// Panics on a zero weight, which [`SignedGraph`] never stores.
    #[inline]
    pub fn sign(&self) -> Sign {
        Sign::of(self.weight).expect("edge with zero weight")
    }
}

/// One side of a CSR adjacency: row offsets plus per-slot neighbor and sign.
/// Rows are sorted by neighbor id.
#[derive(Debug, Clone, PartialEq)]
struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    signs: Vec<Sign>,
}

impl Adjacency {
    fn build(node_count: usize, arcs: impl Iterator<Item = (NodeId, NodeId, Sign)> + Clone) -> Self {
        let mut offsets = vec![0usize; node_count + 1];
        for (from, _, _) in arcs.clone() {
            offsets[from + 1] += 1;
        }
        for i in 0..node_count {
            offsets[i + 1] += offsets[i];
        }
        let total = offsets[node_count];
        let mut cursor = offsets.clone();
        let mut slots = vec![(0usize, Sign::Positive); total];
        for (from, to, sign) in arcs {
            slots[cursor[from]] = (to, sign);
            cursor[from] += 1;
        }
        for i in 0..node_count {
            slots[offsets[i]..offsets[i + 1]].sort_unstable_by_key(|&(to, _)| to);
        }
        let (targets, signs) = slots.into_iter().unzip();
        Adjacency { offsets, targets, signs }
    }

    #[inline]
    fn row(&self, node: NodeId) -> std::ops::Range<usize> {
        self.offsets[node]..self.offsets[node + 1]
    }

    fn find(&self, from: NodeId, to: NodeId) -> Option<Sign> {
        let r = self.row(from);
        self.targets[r.clone()].binary_search(&to).ok().map(|k| self.signs[r.start + k])
    }
}

/// Immutable weighted signed network with CSR adjacency.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedGraph {
    node_count: usize,
    directed: bool,
    edges: Vec<Edge>,
    out: Adjacency,
    // Present for directed graphs only.
    inc: Option<Adjacency>,
}

impl SignedGraph {
    /// Builds a graph from an edge list, validating every invariant.
    ///
    /// In undirected mode an edge given once as `(a, b)` and again as `(b, a)`
    /// with the same weight is the same edge and is stored once.
    pub fn from_edges(
        node_count: usize,
        directed: bool,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, GraphError> {
        use std::collections::HashMap;

        let mut kept = Vec::new();
        let mut seen: HashMap<(NodeId, NodeId), i64> = HashMap::new();
        for e in edges {
            for node in [e.src, e.dst] {
                if node >= node_count {
                    return Err(GraphError::NodeOutOfRange { node, node_count });
                }
            }
            if e.weight == 0 {
                return Err(GraphError::ZeroWeight);
            }
            if e.src == e.dst {
                return Err(GraphError::SelfLoop(e.src));
            }
            if seen.contains_key(&(e.src, e.dst)) {
                return Err(GraphError::DuplicateEdge { src: e.src, dst: e.dst });
            }
            if !directed {
                if let Some(&w) = seen.get(&(e.dst, e.src)) {
                    if w != e.weight {
                        return Err(GraphError::InconsistentUndirected { src: e.src, dst: e.dst });
                    }
                    seen.insert((e.src, e.dst), e.weight);
                    continue;
                }
            }
            seen.insert((e.src, e.dst), e.weight);
            kept.push(e);
        }
        Ok(Self::from_validated(node_count, directed, kept))
    }

    /// Builds the adjacency for edges already known to satisfy the invariants.
    pub(crate) fn from_validated(node_count: usize, directed: bool, edges: Vec<Edge>) -> Self {
        let forward = edges.iter().map(|e| (e.src, e.dst, e.sign()));
        let (out, inc) = if directed {
            let reverse = edges.iter().map(|e| (e.dst, e.src, e.sign()));
            (Adjacency::build(node_count, forward), Some(Adjacency::build(node_count, reverse)))
        } else {
            let both = forward.chain(edges.iter().map(|e| (e.dst, e.src, e.sign())));
            (Adjacency::build(node_count, both), None)
        };
        SignedGraph { node_count, directed, edges, out, inc }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn is_directed(&self) -> bool {
        self.directed
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn negative_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.weight < 0).count()
    }

    /// Successors used by walks: out-neighbors when directed, all neighbors
    /// otherwise. Sorted by id.
    #[inline]
    pub fn out_neighbors(&self, node: NodeId) -> &[NodeId] {
        &self.out.targets[self.out.row(node)]
    }

    /// Signs aligned with [`out_neighbors`](Self::out_neighbors).
    #[inline]
    pub fn out_signs(&self, node: NodeId) -> &[Sign] {
        &self.out.signs[self.out.row(node)]
    }

    #[inline]
    pub fn out_degree(&self, node: NodeId) -> usize {
        self.out.offsets[node + 1] - self.out.offsets[node]
    }

    /// Predecessors in a directed graph; all neighbors in an undirected one.
    pub fn in_neighbors(&self, node: NodeId) -> &[NodeId] {
        match &self.inc {
            Some(inc) => &inc.targets[inc.row(node)],
            None => self.out_neighbors(node),
        }
    }

    pub fn in_signs(&self, node: NodeId) -> &[Sign] {
        match &self.inc {
            Some(inc) => &inc.signs[inc.row(node)],
            None => self.out_signs(node),
        }
    }

    pub fn in_degree(&self, node: NodeId) -> usize {
        self.in_neighbors(node).len()
    }

    /// Row offsets of the out-adjacency.
    pub fn out_offsets(&self) -> &[usize] {
        &self.out.offsets
    }

    #[inline]
    pub fn is_out_neighbor(&self, from: NodeId, to: NodeId) -> bool {
        self.out_neighbors(from).binary_search(&to).is_ok()
    }

    /// Sign of the arc `from -> to` (either orientation when undirected).
    #[inline]
    pub fn arc_sign(&self, from: NodeId, to: NodeId) -> Option<Sign> {
        self.out.find(from, to)
    }

    /// Sign of the connection between `a` and `b` ignoring direction. The arc
    /// `a -> b` takes precedence over `b -> a` when both exist.
    pub fn undirected_sign(&self, a: NodeId, b: NodeId) -> Option<Sign> {
        self.out.find(a, b).or_else(|| match &self.inc {
            Some(inc) => inc.find(a, b),
            None => None,
        })
    }

    /// Neighbors of `node` in the undirected, unsigned view, with the sign of
    /// each connecting arc. A node joined by two antiparallel arcs appears
    /// twice.
    pub fn undirected_arcs(&self, node: NodeId) -> impl Iterator<Item = (NodeId, Sign)> + '_ {
        let out = self.out_neighbors(node).iter().copied().zip(self.out_signs(node).iter().copied());
        let inc: Box<dyn Iterator<Item = (NodeId, Sign)>> = match &self.inc {
            Some(_) => Box::new(self.in_neighbors(node).iter().copied().zip(self.in_signs(node).iter().copied())),
            None => Box::new(std::iter::empty()),
        };
        out.chain(inc)
    }
}
