//! Evaluation protocols for learned embeddings: edge-sign prediction,
//! node-label prediction, partial information, and distance statistics.

mod experiments;
mod features;
mod logreg;
mod metrics;
mod report;

pub use experiments::{
    edge_sign_experiment, edge_sign_repeat, node_label_experiment, node_label_repeat, partial_info_experiment,
    score_edge_signs, score_node_labels, ExperimentConfig,
};
pub use features::{edge_features, edge_features_into, EdgeFeatureOp};
pub use logreg::{train_logreg, train_multiclass, LogRegConfig, LogRegFit, LogRegModel, MultiClassModel};
pub use metrics::{distance_stats, euclidean, Confusion, DistanceStats, Moments};
pub use report::{GroupMean, ResultRow, ResultTable, CSV_HEADER};

use thiserror::Error;

use crate::graph::{GraphError, NodeId};
use crate::trainer::TrainError;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("no examples to fit or score")]
    NoData,
    #[error("need examples of at least two classes")]
    SingleClass,
    #[error("features contain non-finite values")]
    NonFinite,
    #[error("node {node} is outside the embedding of {embedding} nodes")]
    NodeCountMismatch { embedding: usize, node: NodeId },
    #[error("node {0} has no label")]
    Unlabeled(NodeId),
    #[error("invalid evaluation setting: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Train(#[from] TrainError),
}
