//! Two-dimensional embedding of the bundled tribes network.
//!
//! Prints one coordinate pair per tribe followed by the mean distance across
//! alliance and hostility edges.
//!
//!     cargo run --release --example tribes [seed]

use std::fs::File;
use std::io::BufReader;

use signet::eval::distance_stats;
use signet::graph::load_edge_list;
use signet::sampler::WalkConfig;
use signet::trainer::{fit, TrainConfig};

const NAMES: [&str; 16] = [
    "GAVEV", "KOTUN", "OVE", "ALIKA", "NAGAM", "GAHUK", "MASIL", "UKUDZ", "NOTOH", "KOHIK", "GEHAM", "ASARO", "UHETO",
    "SEUVE", "NAGAD", "GAMA",
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(0);
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/tribes.edges");
    let graph = load_edge_list(BufReader::new(File::open(path)?), false)?;

    let walk = WalkConfig { seed, ..WalkConfig::default() };
    let cfg = TrainConfig { dim: 2, total_samples: 200_000, seed, ..TrainConfig::default() };
    let fitted = fit(&graph, &walk, &cfg)?;
    let emb = fitted.run.embedding.final_embedding();

    for (v, name) in NAMES.iter().enumerate() {
        let p = emb.row(v);
        println!("{name:>6} {:>9.3} {:>9.3}", p[0], p[1]);
    }
    let stats = distance_stats(&emb, graph.edges())?;
    if let (Some(pos), Some(neg)) = (stats.positive, stats.negative) {
        println!("alliances: mean distance {:.3} over {} edges", pos.mean, pos.count);
        println!("hostilities: mean distance {:.3} over {} edges", neg.mean, neg.count);
    }
    Ok(())
}
