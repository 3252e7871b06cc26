//! Cache and optimization time on an Erdős–Rényi signed graph, for a range
//! of thread counts.
//!
//!     cargo run --release --example scalability [nodes] [samples] [threads...]

use std::time::Instant;

use signet::graph::{generate_er_signed, ErConfig};
use signet::sampler::{build_cache, WalkConfig};
use signet::trainer::{train, TrainConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let nodes = args.first().map(|s| s.parse()).transpose()?.unwrap_or(100_000);
    let samples = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(10_000_000);
    let threads: Vec<usize> =
        if args.len() > 2 { args[2..].iter().map(|s| s.parse()).collect::<Result<_, _>>()? } else { vec![1, 2, 4] };

    let started = Instant::now();
    let graph =
        generate_er_signed(&ErConfig { nodes, avg_degree: 10.0, negative_fraction: 0.2, directed: false, seed: 1 })?;
    println!(
        "generated {} nodes, {} edges in {:.2}s",
        graph.node_count(),
        graph.edge_count(),
        started.elapsed().as_secs_f64()
    );

    let cache = build_cache(&graph, &WalkConfig::default())?;
    println!(
        "cache: {} entries, {} conflicts, {:.2}s",
        cache.total_entries(),
        cache.conflict_count(),
        cache.build_time().as_secs_f64()
    );

    let mut base = None;
    for t in threads {
        let cfg = TrainConfig { dim: 100, total_samples: samples, threads: t, ..TrainConfig::default() };
        let run = train(&graph, Some(&cache), &cfg)?;
        let secs = run.optimization_time.as_secs_f64();
        let speedup = base.get_or_insert(secs).to_owned() / secs;
        println!("{t} thread(s): optimization {secs:.2}s, speedup {speedup:.2}x");
    }
    Ok(())
}
