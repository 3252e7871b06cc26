//! Edge-sign, node-label and partial-information protocols.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;

use super::features::{edge_features_into, EdgeFeatureOp};
use super::logreg::{train_logreg, train_multiclass, LogRegConfig};
use super::metrics::{distance_stats, Confusion};
use super::report::{ResultRow, ResultTable};
use super::EvalError;
use crate::graph::{remove_outgoing, split_edges, Edge, NodeId, NodeLabels, SignedGraph};
use crate::rng::{self, Stream};
use crate::sampler::WalkConfig;
use crate::trainer::{fit, FinalEmbedding, Fitted, SamplingMode, TrainConfig};

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub walk: WalkConfig,
    /// Its `mode` selects the sampler; its `seed` is ignored in favour of
    /// per-repeat seeds derived from [`seed`](Self::seed).
    pub train: TrainConfig,
    pub logreg: LogRegConfig,
    pub repeats: usize,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            walk: WalkConfig::default(),
            train: TrainConfig::default(),
            logreg: LogRegConfig::default(),
            repeats: 5,
            seed: 0,
        }
    }
}

impl ExperimentConfig {
    /// Seed shared by every component of repeat `r`. Both sampling modes see
    /// the same splits for a given repeat.
    pub fn repeat_seed(&self, r: usize) -> u64 {
        rng::derive_seed(self.seed, Stream::Repeat, r as u64)
    }

    fn embed(&self, graph: &SignedGraph, mode: SamplingMode, seed: u64) -> Result<Fitted, EvalError> {
        let walk = WalkConfig { seed, ..self.walk.clone() };
        let train = TrainConfig { seed, mode, ..self.train.clone() };
        Ok(fit(graph, &walk, &train)?)
    }

    fn check(&self) -> Result<(), EvalError> {
        if self.repeats == 0 {
            return Err(EvalError::InvalidConfig("repeats must be positive".into()));
        }
        Ok(())
    }
}

fn degree(g: &SignedGraph, v: NodeId) -> usize {
    if g.is_directed() {
        g.out_degree(v) + g.in_degree(v)
    } else {
        g.out_degree(v)
    }
}

fn edge_rows(emb: &FinalEmbedding, edges: &[Edge], op: EdgeFeatureOp) -> Result<Vec<Vec<f64>>, EvalError> {
    edges
        .iter()
        .map(|e| {
            let mut row = Vec::with_capacity(op.output_dim(emb.dim()));
            edge_features_into(emb.row(e.src), emb.row(e.dst), op, &mut row)?;
            Ok(row)
        })
        .collect()
}

/// Fits a sign classifier on `train` edge features and scores `test`.
/// Class 1 is the positive sign.
pub fn score_edge_signs(
    emb: &FinalEmbedding,
    train: &[Edge],
    test: &[Edge],
    op: EdgeFeatureOp,
    logreg: &LogRegConfig,
) -> Result<Confusion, EvalError> {
    let n = emb.node_count();
    if let Some(e) = train.iter().chain(test).find(|e| e.src >= n || e.dst >= n) {
        return Err(EvalError::NodeCountMismatch { embedding: n, node: e.src.max(e.dst) });
    }
    if test.is_empty() {
        return Err(EvalError::NoData);
    }
    let x = edge_rows(emb, train, op)?;
    let y: Vec<bool> = train.iter().map(|e| e.weight > 0).collect();
    let model = train_logreg(&x, &y, logreg)?.model;
    let mut confusion = Confusion::new(2);
    for (row, e) in edge_rows(emb, test, op)?.iter().zip(test) {
        confusion.record(usize::from(e.weight > 0), usize::from(model.predict(row)));
    }
    Ok(confusion)
}

/// One repeat of the edge-sign protocol: split edges 50/50, embed the
/// training graph, classify the held-out signs.
pub fn edge_sign_repeat(
    graph: &SignedGraph,
    cfg: &ExperimentConfig,
    op: EdgeFeatureOp,
    repeat: usize,
) -> Result<ResultRow, EvalError> {
    let seed = cfg.repeat_seed(repeat);
    let (train_graph, test) = split_edges(graph, 0.5, seed)?;
    let fitted = cfg.embed(&train_graph, cfg.train.mode, seed)?;
    let emb = fitted.run.embedding.final_embedding();
    let confusion = score_edge_signs(&emb, train_graph.edges(), &test, op, &cfg.logreg)?;
    let isolated = test.iter().filter(|e| degree(&train_graph, e.src) == 0 || degree(&train_graph, e.dst) == 0).count();
    let positive = test.iter().filter(|e| e.weight > 0).count();
    Ok(ResultRow {
        experiment: "edge-sign".into(),
        mode: cfg.train.mode,
        operator: Some(op),
        repeat,
        micro_f1: confusion.micro_f1()?,
        macro_f1: confusion.macro_f1()?,
        ratio: distance_stats(&emb, train_graph.edges())?.ratio(),
        isolated_fraction: Some(isolated as f64 / test.len() as f64),
        test_positive_fraction: Some(positive as f64 / test.len() as f64),
        cache_time: fitted.cache_time,
        optimization_time: fitted.run.optimization_time,
    })
}

/// Edge-sign prediction over `cfg.repeats` independent splits.
pub fn edge_sign_experiment(
    graph: &SignedGraph,
    cfg: &ExperimentConfig,
    op: EdgeFeatureOp,
) -> Result<ResultTable, EvalError> {
    cfg.check()?;
    if graph.negative_edge_count() == 0 || graph.negative_edge_count() == graph.edge_count() {
        return Err(EvalError::SingleClass);
    }
    let rows = (0..cfg.repeats).map(|r| edge_sign_repeat(graph, cfg, op, r)).collect::<Result<_, _>>()?;
    Ok(ResultTable::new(rows))
}

/// Fits a label classifier on the `train` nodes and scores `test`. Classes
/// are indexed by their rank among all label values in `labels`.
pub fn score_node_labels(
    emb: &FinalEmbedding,
    labels: &NodeLabels,
    train: &[NodeId],
    test: &[NodeId],
    logreg: &LogRegConfig,
) -> Result<Confusion, EvalError> {
    let classes: Vec<i64> = labels.values().copied().collect::<BTreeSet<_>>().into_iter().collect();
    if classes.len() < 2 {
        return Err(EvalError::SingleClass);
    }
    if test.is_empty() || train.is_empty() {
        return Err(EvalError::NoData);
    }
    let n = emb.node_count();
    let label = |v: NodeId| -> Result<i64, EvalError> {
        if v >= n {
            return Err(EvalError::NodeCountMismatch { embedding: n, node: v });
        }
        labels.get(&v).copied().ok_or(EvalError::Unlabeled(v))
    };
    let x: Vec<Vec<f64>> = train.iter().map(|&v| emb.row(v).to_vec()).collect();
    let y: Vec<i64> = train.iter().map(|&v| label(v)).collect::<Result<_, _>>()?;
    let model = train_multiclass(&x, &y, logreg)?;
    let index = |c: i64| classes.binary_search(&c).expect("label drawn from the class list");
    let mut confusion = Confusion::new(classes.len());
    for &v in test {
        confusion.record(index(label(v)?), index(model.predict(emb.row(v))));
    }
    Ok(confusion)
}

fn labeled_nodes(labels: &NodeLabels, n: usize) -> Result<Vec<NodeId>, EvalError> {
    if let Some((&v, _)) = labels.iter().find(|(&v, _)| v >= n) {
        return Err(EvalError::NodeCountMismatch { embedding: n, node: v });
    }
    Ok(labels.keys().copied().collect())
}

fn half_split(nodes: &[NodeId], seed: u64) -> (Vec<NodeId>, Vec<NodeId>) {
    let mut order = nodes.to_vec();
    order.shuffle(&mut rng::stream(seed, Stream::LabelSplit, 0));
    let cut = (order.len() as f64 * 0.5).round() as usize;
    let test = order.split_off(cut);
    (order, test)
}

/// One repeat of the node-label protocol: embed the full graph, split the
/// labeled nodes 50/50, classify.
pub fn node_label_repeat(
    graph: &SignedGraph,
    labels: &NodeLabels,
    cfg: &ExperimentConfig,
    repeat: usize,
) -> Result<ResultRow, EvalError> {
    let seed = cfg.repeat_seed(repeat);
    let nodes = labeled_nodes(labels, graph.node_count())?;
    let (train, test) = half_split(&nodes, seed);
    let fitted = cfg.embed(graph, cfg.train.mode, seed)?;
    let emb = fitted.run.embedding.final_embedding();
    let confusion = score_node_labels(&emb, labels, &train, &test, &cfg.logreg)?;
    Ok(ResultRow {
        experiment: "node-label".into(),
        mode: cfg.train.mode,
        operator: None,
        repeat,
        micro_f1: confusion.micro_f1()?,
        macro_f1: confusion.macro_f1()?,
        ratio: distance_stats(&emb, graph.edges()).ok().and_then(|s| s.ratio()),
        isolated_fraction: None,
        test_positive_fraction: None,
        cache_time: fitted.cache_time,
        optimization_time: fitted.run.optimization_time,
    })
}

pub fn node_label_experiment(
    graph: &SignedGraph,
    labels: &NodeLabels,
    cfg: &ExperimentConfig,
) -> Result<ResultTable, EvalError> {
    cfg.check()?;
    let rows = (0..cfg.repeats).map(|r| node_label_repeat(graph, labels, cfg, r)).collect::<Result<_, _>>()?;
    Ok(ResultTable::new(rows))
}

/// For each fraction, removes the out-edges of that share of nodes and
/// predicts the labels of those nodes from embeddings learned without them,
/// once per sampling mode on identical splits. Fraction 0 falls back to a
/// 50/50 split of the labeled nodes with the graph intact.
pub fn partial_info_experiment(
    graph: &SignedGraph,
    labels: &NodeLabels,
    cfg: &ExperimentConfig,
    fractions: &[f64],
) -> Result<ResultTable, EvalError> {
    cfg.check()?;
    if !graph.is_directed() {
        return Err(EvalError::Graph(crate::graph::GraphError::NotDirected));
    }
    let nodes = labeled_nodes(labels, graph.node_count())?;
    let mut rows = Vec::new();
    for &fraction in fractions {
        for repeat in 0..cfg.repeats {
            let seed = cfg.repeat_seed(repeat);
            let (reduced, train, test) = if fraction == 0.0 {
                let (train, test) = half_split(&nodes, seed);
                (graph.clone(), train, test)
            } else {
                let (reduced, held) = remove_outgoing(graph, fraction, seed)?;
                let (test, train): (Vec<NodeId>, Vec<NodeId>) = nodes.iter().partition(|v| held.contains(v));
                (reduced, train, test)
            };
            for mode in [SamplingMode::Targeted, SamplingMode::NegativeSampling] {
                let fitted = cfg.embed(&reduced, mode, seed)?;
                let emb = fitted.run.embedding.final_embedding();
                let confusion = score_node_labels(&emb, labels, &train, &test, &cfg.logreg)?;
                rows.push(ResultRow {
                    experiment: format!("partial:{fraction}"),
                    mode,
                    operator: None,
                    repeat,
                    micro_f1: confusion.micro_f1()?,
                    macro_f1: confusion.macro_f1()?,
                    ratio: None,
                    isolated_fraction: None,
                    test_positive_fraction: None,
                    cache_time: fitted.cache_time,
                    optimization_time: fitted.run.optimization_time,
                });
            }
        }
    }
    Ok(ResultTable::new(rows))
}
