//! Label prediction for nodes that lost all their out-edges, on a directed
//! two-community graph. Targeted sampling can still place such nodes through
//! the caches of nodes pointing at them.
//!
//!     cargo run --release --example partial_information

use signet::eval::{partial_info_experiment, ExperimentConfig};
use signet::graph::{two_community, TwoCommunityConfig};
use signet::trainer::TrainConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (graph, labels) = two_community(&TwoCommunityConfig { directed: true, ..TwoCommunityConfig::default() })?;
    let cfg = ExperimentConfig {
        train: TrainConfig { dim: 16, total_samples: 2_000_000, ..TrainConfig::default() },
        repeats: 3,
        ..ExperimentConfig::default()
    };
    let table = partial_info_experiment(&graph, &labels, &cfg, &[0.1, 0.2, 0.3, 0.4, 0.5])?;
    println!("{:<12} {:<10} {:>8}", "fraction", "mode", "micro F1");
    for m in table.means() {
        println!("{:<12} {:<10} {:>8.4}", m.experiment.trim_start_matches("partial:"), m.mode.name(), m.micro_f1);
    }
    Ok(())
}
