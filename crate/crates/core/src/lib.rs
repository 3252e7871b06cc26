//! Embeddings for signed networks.
//!
//! Nodes are embedded by stochastic gradient ascent on a per-edge objective in
//! which positive edges pull their endpoints together and negative edges push
//! them apart. Instead of classical negative sampling, every node carries two
//! caches of higher-order neighbors found by sign-propagating random walks:
//! nodes that structural balance predicts to be friends and nodes it predicts
//! to be enemies. A positive edge draws extra examples from the enemy cache
//! and a negative edge from the friend cache.
//!
//! The crate is organized bottom-up:
//!
//! - [`graph`]: the signed network, its file formats and synthetic generators.
//! - [`sampler`]: walk caches, conflict resolution and the weighted edge sampler.
//! - [`trainer`]: the gradient step, single- and multi-threaded training.
//! - [`eval`]: edge-sign and node-label prediction harnesses.
//! - [`cli`]: the `signet` command line.
//!
//! ```
//! use signet::graph::{two_community, TwoCommunityConfig};
//! use signet::sampler::{build_cache, WalkConfig};
//! use signet::trainer::{train, TrainConfig};
//!
//! let (graph, _labels) = two_community(&TwoCommunityConfig::default()).unwrap();
//! let cache = build_cache(&graph, &WalkConfig::default()).unwrap();
//! let cfg = TrainConfig { dim: 8, total_samples: 20_000, ..TrainConfig::default() };
//! let run = train(&graph, Some(&cache), &cfg).unwrap();
//! assert_eq!(run.embedding.final_embedding().dim(), 8);
//! ```

pub mod cli;
pub mod eval;
pub mod graph;
pub mod rng;
pub mod sampler;
pub mod trainer;
