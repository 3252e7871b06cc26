//! Edge-sign prediction on the two-community benchmark with every feature
//! operator, in both sampling modes. Writes the results table to stdout.
//!
//!     cargo run --release --example edge_sign_prediction [samples]

use signet::eval::{edge_sign_experiment, EdgeFeatureOp, ExperimentConfig, ResultTable};
use signet::graph::{two_community, TwoCommunityConfig};
use signet::trainer::{SamplingMode, TrainConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let samples = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(2_000_000);
    let (graph, _) = two_community(&TwoCommunityConfig::default())?;

    let mut table = ResultTable::default();
    for mode in [SamplingMode::Targeted, SamplingMode::NegativeSampling] {
        let cfg = ExperimentConfig {
            train: TrainConfig { dim: 16, total_samples: samples, mode, ..TrainConfig::default() },
            ..ExperimentConfig::default()
        };
        for op in EdgeFeatureOp::ALL {
            table.extend(edge_sign_experiment(&graph, &cfg, op)?);
        }
    }
    table.write_csv(std::io::stdout().lock())?;
    eprint!("{}", table.summary());
    Ok(())
}
