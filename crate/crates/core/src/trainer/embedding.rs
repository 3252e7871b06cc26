//! Embedding storage and the embedding file format.

use std::io::{BufRead, Write};
use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng;

use super::TrainError;
use crate::graph::{IdMap, NodeId};
use crate::rng::{self, Stream};

/// Which per-node vector a parameter access targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Table {
    Vectors,
    Contexts,
}

/// Parameter storage seen by the gradient step.
pub(crate) trait Params {
    fn dim(&self) -> usize;
    fn read(&self, table: Table, node: NodeId, out: &mut [f64]);
    /// `row += delta`.
    fn add(&mut self, table: Table, node: NodeId, delta: &[f64]);
}

/// Per-node vectors `x_i` and, for directed graphs, context vectors `φ_i`.
/// Both have `dim` entries; the final embedding has `dim` (undirected) or
/// `2 * dim` (directed) entries.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    nodes: usize,
    dim: usize,
    vectors: Vec<f64>,
    contexts: Option<Vec<f64>>,
}

impl EmbeddingMatrix {
    pub fn zeros(nodes: usize, dim: usize, directed: bool) -> Self {
        EmbeddingMatrix {
            nodes,
            dim,
            vectors: vec![0.0; nodes * dim],
            contexts: directed.then(|| vec![0.0; nodes * dim]),
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    /// Length of each `x_i` (and `φ_i`).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_directed(&self) -> bool {
        self.contexts.is_some()
    }

    pub fn vector(&self, node: NodeId) -> &[f64] {
        &self.vectors[node * self.dim..(node + 1) * self.dim]
    }

    pub fn vector_mut(&mut self, node: NodeId) -> &mut [f64] {
        &mut self.vectors[node * self.dim..(node + 1) * self.dim]
    }

    /// `φ_i` in directed mode; `x_i` otherwise, since undirected graphs use
    /// one vector per node for both roles.
    pub fn context(&self, node: NodeId) -> &[f64] {
        match &self.contexts {
            Some(c) => &c[node * self.dim..(node + 1) * self.dim],
            None => self.vector(node),
        }
    }

    pub fn context_mut(&mut self, node: NodeId) -> &mut [f64] {
        let dim = self.dim;
        match &mut self.contexts {
            Some(c) => &mut c[node * dim..(node + 1) * dim],
            None => &mut self.vectors[node * dim..(node + 1) * dim],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.vectors.iter().chain(self.contexts.iter().flatten()).all(|v| v.is_finite())
    }

    /// `f_i = x_i ⊕ φ_i` for directed graphs, `f_i = x_i` otherwise.
    pub fn final_embedding(&self) -> FinalEmbedding {
        match &self.contexts {
            None => FinalEmbedding { dim: self.dim, data: self.vectors.clone() },
            Some(ctx) => {
                let mut data = Vec::with_capacity(2 * self.vectors.len());
                for i in 0..self.nodes {
                    data.extend_from_slice(&self.vectors[i * self.dim..(i + 1) * self.dim]);
                    data.extend_from_slice(&ctx[i * self.dim..(i + 1) * self.dim]);
                }
                FinalEmbedding { dim: 2 * self.dim, data }
            }
        }
    }

    fn slot(&self, table: Table) -> Table {
        if self.contexts.is_none() {
            Table::Vectors
        } else {
            table
        }
    }
}

impl Params for EmbeddingMatrix {
    fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn read(&self, table: Table, node: NodeId, out: &mut [f64]) {
        match self.slot(table) {
            Table::Vectors => out.copy_from_slice(self.vector(node)),
            Table::Contexts => out.copy_from_slice(self.context(node)),
        }
    }

    #[inline]
    fn add(&mut self, table: Table, node: NodeId, delta: &[f64]) {
        let row = match self.slot(table) {
            Table::Vectors => self.vector_mut(node),
            Table::Contexts => self.context_mut(node),
        };
        for (r, d) in row.iter_mut().zip(delta) {
            *r += d;
        }
    }
}

/// Initial parameters: `x_i` uniform in `[-0.5/D, 0.5/D]`, `φ_i = 0`.
pub fn init_embeddings(nodes: usize, dim: usize, directed: bool, seed: u64) -> EmbeddingMatrix {
    let mut m = EmbeddingMatrix::zeros(nodes, dim, directed);
    let bound = 0.5 / dim as f64;
    let mut rng = rng::stream(seed, Stream::Init, 0);
    for v in &mut m.vectors {
        *v = rng.gen_range(-bound..=bound);
    }
    m
}

/// Lock-free shared copy of an [`EmbeddingMatrix`] for concurrent workers.
///
/// Entries are `f64` bit patterns in relaxed atomics: each entry is read and
/// written whole, but a row read may mix values from different writers and a
/// read-modify-write may lose a concurrent update.
pub(crate) struct SharedMatrix {
    dim: usize,
    vectors: Vec<AtomicU64>,
    contexts: Option<Vec<AtomicU64>>,
    nodes: usize,
}

impl SharedMatrix {
    pub(crate) fn new(m: EmbeddingMatrix) -> Self {
        let wrap = |v: Vec<f64>| v.into_iter().map(|x| AtomicU64::new(x.to_bits())).collect();
        SharedMatrix { dim: m.dim, nodes: m.nodes, vectors: wrap(m.vectors), contexts: m.contexts.map(wrap) }
    }

    pub(crate) fn into_matrix(self) -> EmbeddingMatrix {
        let unwrap = |v: Vec<AtomicU64>| v.into_iter().map(|x| f64::from_bits(x.into_inner())).collect();
        EmbeddingMatrix {
            nodes: self.nodes,
            dim: self.dim,
            vectors: unwrap(self.vectors),
            contexts: self.contexts.map(unwrap),
        }
    }

    #[inline]
    fn row(&self, table: Table, node: NodeId) -> &[AtomicU64] {
        let store = match (table, &self.contexts) {
            (Table::Contexts, Some(c)) => c,
            _ => &self.vectors,
        };
        &store[node * self.dim..(node + 1) * self.dim]
    }
}

/// A worker's handle on a [`SharedMatrix`].
#[derive(Clone, Copy)]
pub(crate) struct SharedView<'a>(pub(crate) &'a SharedMatrix);

impl Params for SharedView<'_> {
    fn dim(&self) -> usize {
        self.0.dim
    }

    #[inline]
    fn read(&self, table: Table, node: NodeId, out: &mut [f64]) {
        for (o, cell) in out.iter_mut().zip(self.0.row(table, node)) {
            *o = f64::from_bits(cell.load(Ordering::Relaxed));
        }
    }

    #[inline]
    fn add(&mut self, table: Table, node: NodeId, delta: &[f64]) {
        for (cell, d) in self.0.row(table, node).iter().zip(delta) {
            let v = f64::from_bits(cell.load(Ordering::Relaxed)) + d;
            cell.store(v.to_bits(), Ordering::Relaxed);
        }
    }
}

/// Row-major `n x K` matrix of final node embeddings.
#[derive(Debug, Clone, PartialEq)]
pub struct FinalEmbedding {
    dim: usize,
    data: Vec<f64>,
}

impl FinalEmbedding {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, TrainError> {
        let dim = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != dim) {
            return Err(TrainError::Format("rows of unequal length".into()));
        }
        Ok(FinalEmbedding { dim, data: rows.into_iter().flatten().collect() })
    }

    pub fn node_count(&self) -> usize {
        self.data.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, node: NodeId) -> &[f64] {
        &self.data[node * self.dim..(node + 1) * self.dim]
    }

    /// Writes `node_count K` then `id f_1 ... f_K` per node. Ids go through
    /// `ids` when the graph was loaded with remapping.
    pub fn write<W: Write>(&self, ids: Option<&IdMap>, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{} {}", self.node_count(), self.dim)?;
        for i in 0..self.node_count() {
            match ids {
                Some(map) => write!(out, "{}", map.original(i))?,
                None => write!(out, "{i}")?,
            }
            for v in self.row(i) {
                write!(out, " {v}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    /// Reads the format produced by [`write`](Self::write), returning the
    /// embedding with rows in file order and the id of each row.
    pub fn read<R: BufRead>(source: R) -> Result<(Self, Vec<u64>), TrainError> {
        let mut lines = source.lines();
        let header = lines.next().ok_or_else(|| TrainError::Format("empty embedding file".into()))??;
        let head: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| TrainError::Format(format!("bad header `{header}`"))))
            .collect::<Result<_, _>>()?;
        let [count, dim] = head[..] else {
            return Err(TrainError::Format(format!("bad header `{header}`")));
        };
        let mut ids = Vec::with_capacity(count);
        let mut data = Vec::with_capacity(count * dim);
        for (k, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let bad = || TrainError::Format(format!("line {}: malformed row", k + 2));
            let mut fields = line.split_whitespace();
            ids.push(fields.next().ok_or_else(bad)?.parse().map_err(|_| bad())?);
            let before = data.len();
            for f in fields {
                data.push(f.parse::<f64>().map_err(|_| bad())?);
            }
            if data.len() - before != dim {
                return Err(bad());
            }
        }
        if ids.len() != count {
            return Err(TrainError::Format(format!("header declares {count} rows, found {}", ids.len())));
        }
        Ok((FinalEmbedding { dim, data }, ids))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_bounds_and_determinism() {
        let a = init_embeddings(30, 8, true, 5);
        let b = init_embeddings(30, 8, true, 5);
        assert_eq!(a, b);
        for i in 0..30 {
            assert!(a.vector(i).iter().all(|v| v.abs() <= 0.5 / 8.0));
            assert!(a.context(i).iter().all(|&v| v == 0.0));
        }
        let u = init_embeddings(30, 8, false, 5);
        assert_eq!(u.context(3), u.vector(3));
    }

    #[test]
    fn concatenation() {
        let mut m = EmbeddingMatrix::zeros(1, 2, true);
        m.vector_mut(0).copy_from_slice(&[1.0, 2.0]);
        m.context_mut(0).copy_from_slice(&[3.0, 4.0]);
        assert_eq!(m.final_embedding().row(0), &[1.0, 2.0, 3.0, 4.0]);
        let u = init_embeddings(3, 5, false, 0);
        let f = u.final_embedding();
        assert_eq!(f.row(2), u.vector(2));
        assert_eq!(init_embeddings(2, 20, true, 0).final_embedding().dim(), 40);
    }

    #[test]
    fn shared_round_trip() {
        let m = init_embeddings(4, 3, true, 1);
        let shared = SharedMatrix::new(m.clone());
        let mut view = SharedView(&shared);
        view.add(Table::Contexts, 2, &[1.0, 2.0, 3.0]);
        let mut buf = [0.0; 3];
        view.read(Table::Contexts, 2, &mut buf);
        assert_eq!(buf, [1.0, 2.0, 3.0]);
        let back = shared.into_matrix();
        assert_eq!(back.vector(1), m.vector(1));
        assert_eq!(back.context(2), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn file_round_trip() {
        let f = init_embeddings(5, 3, true, 2).final_embedding();
        let mut buf = Vec::new();
        f.write(None, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("5 6\n0 "));
        let (back, ids) = FinalEmbedding::read(buf.as_slice()).unwrap();
        assert_eq!(back, f);
        assert_eq!(ids, vec![0, 1, 2, 3, 4]);
        assert!(FinalEmbedding::read("2 2\n0 1 2\n".as_bytes()).is_err());
        assert!(FinalEmbedding::read("1 2\n0 1\n".as_bytes()).is_err());
    }
}
