//! Node-label prediction: community membership from the embedding alone.
//!
//!     cargo run --release --example node_labels

use signet::eval::{node_label_experiment, ExperimentConfig, ResultTable};
use signet::graph::{two_community, TwoCommunityConfig};
use signet::trainer::{SamplingMode, TrainConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (graph, labels) = two_community(&TwoCommunityConfig::default())?;
    let mut table = ResultTable::default();
    for mode in [SamplingMode::Targeted, SamplingMode::NegativeSampling] {
        let cfg = ExperimentConfig {
            train: TrainConfig { dim: 16, total_samples: 2_000_000, mode, ..TrainConfig::default() },
            ..ExperimentConfig::default()
        };
        table.extend(node_label_experiment(&graph, &labels, &cfg)?);
    }
    table.write_csv(std::io::stdout().lock())?;
    eprint!("{}", table.summary());
    Ok(())
}
