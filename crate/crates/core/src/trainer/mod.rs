//! Embedding training by asynchronous stochastic gradient ascent.
//!
//! Each iteration draws an edge with probability proportional to its
//! magnitude, draws `neg_samples` extra examples for the edge's source (from
//! the walk cache in targeted mode, uniformly from non-neighbors otherwise)
//! and applies [`edge_update`]. With `threads > 1` workers share the
//! parameters without locks and each spends its own share of the budget.

mod embedding;
mod sigmoid;
mod update;

pub use embedding::{init_embeddings, EmbeddingMatrix, FinalEmbedding};
pub use sigmoid::{ln_sigmoid_exact, sigmoid, sigmoid_exact, Activation, SigmoidTable};
pub use update::{edge_update, pair_score};

use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::Rng;
use thiserror::Error;

use crate::graph::{NodeId, SignedGraph};
use crate::rng::{self, Stream};
use crate::sampler::{self, build_edge_alias, AliasTable, NodeCache, SamplerError, TargetedSample, WalkConfig};
use embedding::{Params, SharedMatrix, SharedView};
use sigmoid::Logistic;
use update::{step, StepScratch};

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("invalid training configuration: {0}")]
    InvalidConfig(String),
    #[error("targeted mode needs a walk cache built over the training graph")]
    MissingCache,
    #[error("non-finite parameters while updating node {node}")]
    Diverged { node: NodeId },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error("embedding file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Source of the extra examples drawn per edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingMode {
    /// Walk-cache examples with balance-estimated signs.
    Targeted,
    /// Uniform non-neighbors trained with the sign opposite the edge.
    NegativeSampling,
}

impl FromStr for SamplingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "targeted" => Ok(SamplingMode::Targeted),
            "ns" | "negative-sampling" => Ok(SamplingMode::NegativeSampling),
            other => Err(format!("unknown mode `{other}` (expected targeted or ns)")),
        }
    }
}

impl SamplingMode {
    pub fn name(self) -> &'static str {
        match self {
            SamplingMode::Targeted => "targeted",
            SamplingMode::NegativeSampling => "ns",
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainConfig {
    /// Final embedding length K; each of `x_i`, `φ_i` gets K/2 in directed mode.
    pub dim: usize,
    /// Number of edge draws T.
    pub total_samples: u64,
    /// Extra examples per edge.
    pub neg_samples: usize,
    /// Initial step size ρ₀.
    pub learning_rate: f64,
    pub mode: SamplingMode,
    pub threads: usize,
    pub seed: u64,
    pub activation: Activation,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dim: 40,
            total_samples: 100_000_000,
            neg_samples: 5,
            learning_rate: 0.025,
            mode: SamplingMode::Targeted,
            threads: 1,
            seed: 0,
            activation: Activation::Table,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self, directed: bool) -> Result<(), TrainError> {
        let bad = |m: String| Err(TrainError::InvalidConfig(m));
        if self.dim == 0 {
            return bad("dimension must be positive".into());
        }
        if directed && !self.dim.is_multiple_of(2) {
            return bad(format!("directed mode needs an even dimension, got {}", self.dim));
        }
        if self.total_samples == 0 {
            return bad("total samples must be positive".into());
        }
        if self.neg_samples == 0 {
            return bad("samples per edge must be positive".into());
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad(format!("learning rate must be positive, got {}", self.learning_rate));
        }
        if self.threads == 0 {
            return bad("thread count must be positive".into());
        }
        Ok(())
    }

    /// Length of each stored vector.
    pub fn vector_dim(&self, directed: bool) -> usize {
        if directed {
            self.dim / 2
        } else {
            self.dim
        }
    }
}

/// Step size at iteration `t` of `total`: linear decay with a floor of
/// `1e-4 * initial`.
#[inline]
pub fn step_size(initial: f64, t: u64, total: u64) -> f64 {
    initial * (1.0 - t as f64 / total as f64).max(1e-4)
}

/// Number of windows in [`TrainRun::objective_trace`].
pub const TRACE_WINDOWS: usize = 10;

#[derive(Debug, Clone)]
pub struct TrainRun {
    pub embedding: EmbeddingMatrix,
    /// Mean per-edge objective over consecutive tenths of the run.
    pub objective_trace: Vec<f64>,
    /// Draws that fell back to uniform non-neighbors in targeted mode.
    pub fallback_draws: u64,
    pub optimization_time: Duration,
}

struct WorkerStats {
    sums: [f64; TRACE_WINDOWS],
    counts: [u64; TRACE_WINDOWS],
    fallback: u64,
}

struct Job<'a> {
    graph: &'a SignedGraph,
    cache: Option<&'a NodeCache>,
    alias: &'a AliasTable,
    cfg: &'a TrainConfig,
    logistic: &'a Logistic,
}

fn run_worker<P: Params>(job: &Job<'_>, params: &mut P, worker: u64, budget: u64) -> Result<WorkerStats, TrainError> {
    let Job { graph, cache, alias, cfg, logistic } = *job;
    let mut rng = rng::stream(cfg.seed, Stream::Training, worker);
    let mut scratch = StepScratch::new(params.dim());
    let mut samples: Vec<TargetedSample> = Vec::with_capacity(cfg.neg_samples);
    let mut stats = WorkerStats { sums: [0.0; TRACE_WINDOWS], counts: [0; TRACE_WINDOWS], fallback: 0 };
    for t in 0..budget {
        let rho = step_size(cfg.learning_rate, t, budget);
        let edge = sampler::draw_edge(alias, graph, &mut rng);
        let (i, j) =
            if !graph.is_directed() && rng.gen::<bool>() { (edge.dst, edge.src) } else { (edge.src, edge.dst) };
        let sign = edge.sign();
        samples.clear();
        match cache {
            Some(cache) => {
                sampler::sample_targeted_into(cache, graph, i, sign, cfg.neg_samples, &mut rng, &mut samples);
                stats.fallback += samples.iter().filter(|s| s.fallback).count() as u64;
            }
            None => {
                for _ in 0..cfg.neg_samples {
                    match sampler::uniform_non_neighbor(graph, i, &mut rng) {
                        Some(node) => samples.push(TargetedSample { node, sign: -sign, fallback: true }),
                        None => break,
                    }
                }
            }
        }
        let terms = std::iter::once((j, sign)).chain(samples.iter().map(|s| (s.node, s.sign)));
        let o = step(params, i, terms, rho, logistic, &mut scratch)?;
        let w = (t * TRACE_WINDOWS as u64 / budget) as usize;
        stats.sums[w] += o;
        stats.counts[w] += 1;
    }
    Ok(stats)
}

/// Trains embeddings for `graph`. `cache` is required in targeted mode and
/// ignored in negative-sampling mode.
///
/// Single-threaded runs are bitwise reproducible for a fixed seed.
pub fn train(graph: &SignedGraph, cache: Option<&NodeCache>, cfg: &TrainConfig) -> Result<TrainRun, TrainError> {
    let directed = graph.is_directed();
    cfg.validate(directed)?;
    let cache = match cfg.mode {
        SamplingMode::Targeted => {
            let c = cache.ok_or(TrainError::MissingCache)?;
            if c.node_count() != graph.node_count() {
                return Err(TrainError::MissingCache);
            }
            Some(c)
        }
        SamplingMode::NegativeSampling => None,
    };
    let alias = build_edge_alias(graph)?;
    let logistic = Logistic::from(&cfg.activation);
    let job = Job { graph, cache, alias: &alias, cfg, logistic: &logistic };
    let mut emb = init_embeddings(graph.node_count(), cfg.vector_dim(directed), directed, cfg.seed);

    let started = Instant::now();
    let threads = cfg.threads as u64;
    let budget = |w: u64| cfg.total_samples / threads + u64::from(w < cfg.total_samples % threads);
    let stats: Vec<WorkerStats> = if threads == 1 {
        vec![run_worker(&job, &mut emb, 0, cfg.total_samples)?]
    } else {
        let shared = SharedMatrix::new(emb);
        let results: Vec<Result<WorkerStats, TrainError>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .filter(|&w| budget(w) > 0)
                .map(|w| {
                    let job = &job;
                    let mut view = SharedView(&shared);
                    scope.spawn(move || run_worker(job, &mut view, w, budget(w)))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("training worker panicked")).collect()
        });
        emb = shared.into_matrix();
        results.into_iter().collect::<Result<_, _>>()?
    };
    let optimization_time = started.elapsed();

    if !emb.is_finite() {
        let node = (0..emb.node_count())
            .find(|&i| emb.vector(i).iter().chain(emb.context(i)).any(|v| !v.is_finite()))
            .unwrap_or(0);
        return Err(TrainError::Diverged { node });
    }
    let objective_trace = (0..TRACE_WINDOWS)
        .map(|w| {
            let (s, c) = stats.iter().fold((0.0, 0u64), |(s, c), st| (s + st.sums[w], c + st.counts[w]));
            if c == 0 {
                f64::NAN
            } else {
                s / c as f64
            }
        })
        .collect();
    Ok(TrainRun {
        embedding: emb,
        objective_trace,
        fallback_draws: stats.iter().map(|s| s.fallback).sum(),
        optimization_time,
    })
}

/// Output of [`fit`].
#[derive(Debug, Clone)]
pub struct Fitted {
    pub run: TrainRun,
    /// Zero in negative-sampling mode, where no cache is built.
    pub cache_time: Duration,
    pub cache_entries: usize,
    pub conflicts: usize,
}

/// Builds the walk cache when the mode needs one, then trains.
pub fn fit(graph: &SignedGraph, walk: &WalkConfig, cfg: &TrainConfig) -> Result<Fitted, TrainError> {
    cfg.validate(graph.is_directed())?;
    let cache = match cfg.mode {
        SamplingMode::Targeted => Some(sampler::build_cache(graph, walk)?),
        SamplingMode::NegativeSampling => None,
    };
    let run = train(graph, cache.as_ref(), cfg)?;
    Ok(Fitted {
        run,
        cache_time: cache.as_ref().map_or(Duration::ZERO, NodeCache::build_time),
        cache_entries: cache.as_ref().map_or(0, NodeCache::total_entries),
        conflicts: cache.as_ref().map_or(0, NodeCache::conflict_count),
    })
}
