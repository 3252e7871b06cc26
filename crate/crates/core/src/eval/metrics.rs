//! Confusion counts, F1 scores and embedding distance statistics.

use super::EvalError;
use crate::graph::Edge;
use crate::trainer::FinalEmbedding;

/// `k x k` counts indexed by (actual class, predicted class).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Confusion {
    classes: usize,
    counts: Vec<u64>,
}

impl Confusion {
    pub fn new(classes: usize) -> Self {
        Confusion { classes, counts: vec![0; classes * classes] }
    }

    /// Builds counts from a `k x k` row-major matrix.
    pub fn from_matrix(rows: &[Vec<u64>]) -> Result<Self, EvalError> {
        let k = rows.len();
        if rows.iter().any(|r| r.len() != k) {
            return Err(EvalError::DimensionMismatch { left: k, right: rows.iter().map(Vec::len).max().unwrap_or(0) });
        }
        Ok(Confusion { classes: k, counts: rows.iter().flatten().copied().collect() })
    }

    /// Binary counts with class 1 as the positive class.
    pub fn binary(tp: u64, fp: u64, fn_: u64, tn: u64) -> Self {
        Confusion { classes: 2, counts: vec![tn, fp, fn_, tp] }
    }

    pub fn record(&mut self, actual: usize, predicted: usize) {
        self.counts[actual * self.classes + predicted] += 1;
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn count(&self, actual: usize, predicted: usize) -> u64 {
        self.counts[actual * self.classes + predicted]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    fn correct(&self) -> u64 {
        (0..self.classes).map(|c| self.count(c, c)).sum()
    }

    pub fn accuracy(&self) -> Result<f64, EvalError> {
        let total = self.nonempty()?;
        Ok(self.correct() as f64 / total as f64)
    }

    fn nonempty(&self) -> Result<u64, EvalError> {
        match self.total() {
            0 => Err(EvalError::NoData),
            t => Ok(t),
        }
    }

    /// F1 of class `c`; zero when precision + recall is zero.
    pub fn class_f1(&self, c: usize) -> f64 {
        let tp = self.count(c, c) as f64;
        let predicted: u64 = (0..self.classes).map(|a| self.count(a, c)).sum();
        let actual: u64 = (0..self.classes).map(|p| self.count(c, p)).sum();
        let fp = predicted as f64 - tp;
        let fn_ = actual as f64 - tp;
        if tp == 0.0 {
            0.0
        } else {
            2.0 * tp / (2.0 * tp + fp + fn_)
        }
    }

    /// F1 over TP/FP/FN pooled across classes.
    pub fn micro_f1(&self) -> Result<f64, EvalError> {
        let total = self.nonempty()?;
        let tp = self.correct() as f64;
        let wrong = (total - self.correct()) as f64;
        // Each error is one false positive and one false negative.
        Ok(2.0 * tp / (2.0 * tp + 2.0 * wrong))
    }

    /// Unweighted mean of the per-class F1 scores.
    pub fn macro_f1(&self) -> Result<f64, EvalError> {
        self.nonempty()?;
        Ok((0..self.classes).map(|c| self.class_f1(c)).sum::<f64>() / self.classes as f64)
    }
}

/// Mean and population standard deviation of a set of distances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    pub sd: f64,
}

impl Moments {
    fn of(values: &[f64]) -> Option<Moments> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Some(Moments { count: values.len(), mean, sd: var.sqrt() })
    }
}

/// Euclidean distances between endpoint embeddings, split by edge sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceStats {
    pub positive: Option<Moments>,
    pub negative: Option<Moments>,
}

impl DistanceStats {
    /// Positive mean over negative mean; absent when either class is
    /// missing or the negative mean is zero.
    pub fn ratio(&self) -> Option<f64> {
        match (self.positive, self.negative) {
            (Some(p), Some(n)) if n.mean > 0.0 => Some(p.mean / n.mean),
            _ => None,
        }
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn distance_stats(emb: &FinalEmbedding, edges: &[Edge]) -> Result<DistanceStats, EvalError> {
    if edges.is_empty() {
        return Err(EvalError::NoData);
    }
    let n = emb.node_count();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for e in edges {
        if e.src >= n || e.dst >= n {
            return Err(EvalError::NodeCountMismatch { embedding: n, node: e.src.max(e.dst) });
        }
        let d = euclidean(emb.row(e.src), emb.row(e.dst));
        if e.weight > 0 {
            pos.push(d);
        } else {
            neg.push(d);
        }
    }
    Ok(DistanceStats { positive: Moments::of(&pos), negative: Moments::of(&neg) })
}
