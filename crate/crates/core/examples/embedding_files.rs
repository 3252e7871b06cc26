//! File round trip with sparse node ids: read an edge list whose ids are not
//! dense, train, write the embedding under the original ids and read it back.
//!
//!     cargo run --example embedding_files

use signet::graph::load_edge_list_remapped;
use signet::sampler::WalkConfig;
use signet::trainer::{fit, FinalEmbedding, SamplingMode, TrainConfig};

const EDGES: &str = "\
# src dst weight
1001 2002 1
2002 3003 1
3003 1001 1
1001 7007 -2
7007 9009 1
9009 3003 -1
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (graph, ids) = load_edge_list_remapped(EDGES.as_bytes(), true)?;
    println!("{} nodes, {} arcs; dense 0 is raw {}", graph.node_count(), graph.edge_count(), ids.original(0));

    let cfg = TrainConfig { dim: 4, total_samples: 50_000, mode: SamplingMode::Targeted, ..TrainConfig::default() };
    let fitted = fit(&graph, &WalkConfig { walk_length: 6, ..WalkConfig::default() }, &cfg)?;
    let emb = fitted.run.embedding.final_embedding();

    let mut file = Vec::new();
    emb.write(Some(&ids), &mut file)?;
    print!("{}", String::from_utf8_lossy(&file));

    let (back, raw_ids) = FinalEmbedding::read(file.as_slice())?;
    assert_eq!(back.dim(), 4);
    assert_eq!(raw_ids, vec![1001, 2002, 3003, 7007, 9009]);
    println!("read back {} rows", back.node_count());
    Ok(())
}
