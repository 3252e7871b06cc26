//! Edge-list and label file formats.
//!
//! Edge lists carry one `src dst weight` row per line; `#` lines are comments.
//! The writer emits a `# nodes N` comment which the loader honors, so graphs
//! whose highest-numbered nodes are isolated survive a round trip.

use std::collections::{BTreeMap, HashMap};
use std::io::{BufRead, Write};

use super::{Edge, GraphError, NodeId, SignedGraph};

/// Bijection between the raw ids found in a file and dense node indices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdMap {
    originals: Vec<u64>,
    dense: HashMap<u64, NodeId>,
}

impl IdMap {
    fn intern(&mut self, raw: u64) -> NodeId {
        let next = self.originals.len();
        *self.dense.entry(raw).or_insert_with(|| {
            self.originals.push(raw);
            next
        })
    }

    pub fn len(&self) -> usize {
        self.originals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.originals.is_empty()
    }

    pub fn dense(&self, raw: u64) -> Option<NodeId> {
        self.dense.get(&raw).copied()
    }

    pub fn original(&self, node: NodeId) -> u64 {
        self.originals[node]
    }

    /// Writes `dense original` pairs, one per line.
    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (dense, raw) in self.originals.iter().enumerate() {
            writeln!(out, "{dense} {raw}")?;
        }
        Ok(())
    }
}

struct Row {
    src: u64,
    dst: u64,
    weight: i64,
}

fn parse_rows<R: BufRead>(source: R) -> Result<(Vec<Row>, Option<usize>), GraphError> {
    let mut rows = Vec::new();
    let mut declared = None;
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            let mut parts = comment.split_whitespace();
            if let (Some("nodes"), Some(n), None) = (parts.next(), parts.next(), parts.next()) {
                declared = n.parse().ok();
            }
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(GraphError::Parse {
                line: lineno,
                message: format!("expected `src dst weight`, found {} fields", fields.len()),
            });
        }
        let id = |s: &str| {
            s.parse::<u64>().map_err(|_| GraphError::Parse { line: lineno, message: format!("invalid node id `{s}`") })
        };
        let weight = fields[2]
            .parse::<i64>()
            .map_err(|_| GraphError::Parse { line: lineno, message: format!("invalid weight `{}`", fields[2]) })?;
        if weight == 0 {
            return Err(GraphError::ZeroWeightLine { line: lineno });
        }
        rows.push(Row { src: id(fields[0])?, dst: id(fields[1])?, weight });
    }
    Ok((rows, declared))
}

/// Reads an edge list whose node ids are used as dense indices directly;
/// `node_count` is the largest id plus one (or the `# nodes` declaration when
/// larger).
pub fn load_edge_list<R: BufRead>(source: R, directed: bool) -> Result<SignedGraph, GraphError> {
    let (rows, declared) = parse_rows(source)?;
    let max_id = rows.iter().map(|r| r.src.max(r.dst)).max();
    let node_count = max_id.map_or(0, |m| m as usize + 1).max(declared.unwrap_or(0));
    let edges = rows.into_iter().map(|r| Edge::new(r.src as usize, r.dst as usize, r.weight));
    SignedGraph::from_edges(node_count, directed, edges)
}

/// Reads an edge list with arbitrary (sparse) ids, renumbering nodes densely
/// in order of first appearance.
pub fn load_edge_list_remapped<R: BufRead>(source: R, directed: bool) -> Result<(SignedGraph, IdMap), GraphError> {
    let (rows, _) = parse_rows(source)?;
    let mut ids = IdMap::default();
    let edges: Vec<Edge> =
        rows.into_iter().map(|r| Edge::new(ids.intern(r.src), ids.intern(r.dst), r.weight)).collect();
    let graph = SignedGraph::from_edges(ids.len(), directed, edges)?;
    Ok((graph, ids))
}

/// Writes `graph` in the format read by [`load_edge_list`], preserving edge
/// order.
pub fn write_edge_list<W: Write>(graph: &SignedGraph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "# nodes {}", graph.node_count())?;
    for e in graph.edges() {
        writeln!(out, "{} {} {}", e.src, e.dst, e.weight)?;
    }
    Ok(())
}

/// Integer class label per node.
pub type NodeLabels = BTreeMap<NodeId, i64>;

/// Reads `node label` lines. Raw ids go through `ids` when given; every
/// labeled node must exist among `node_count` nodes.
pub fn load_labels<R: BufRead>(source: R, node_count: usize, ids: Option<&IdMap>) -> Result<NodeLabels, GraphError> {
    let mut labels = NodeLabels::new();
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let bad = |message: String| GraphError::Parse { line: idx + 1, message };
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(bad(format!("expected `node label`, found {} fields", fields.len())));
        }
        let raw: u64 = fields[0].parse().map_err(|_| bad(format!("invalid node id `{}`", fields[0])))?;
        let label: i64 = fields[1].parse().map_err(|_| bad(format!("invalid label `{}`", fields[1])))?;
        let node = match ids {
            Some(map) => map.dense(raw).ok_or(GraphError::UnknownLabelNode(raw))?,
            None if (raw as usize) < node_count => raw as usize,
            None => return Err(GraphError::UnknownLabelNode(raw)),
        };
        labels.insert(node, label);
    }
    Ok(labels)
}

/// Writes `node label` lines in node order.
pub fn write_labels<W: Write>(labels: &NodeLabels, ids: Option<&IdMap>, mut out: W) -> std::io::Result<()> {
    for (&node, label) in labels {
        match ids {
            Some(map) => writeln!(out, "{} {label}", map.original(node))?,
            None => writeln!(out, "{node} {label}")?,
        }
    }
    Ok(())
}
