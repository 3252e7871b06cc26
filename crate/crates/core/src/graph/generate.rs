//! Synthetic signed graphs.

use rand::Rng as _;

use super::{Edge, GraphError, NodeLabels, SignedGraph};
use crate::rng::{self, Stream};

/// Parameters of an Erdős–Rényi signed graph.
#[derive(Debug, Clone, PartialEq)]
pub struct ErConfig {
    pub nodes: usize,
    pub avg_degree: f64,
    pub negative_fraction: f64,
    /// Orient each edge uniformly at random.
    pub directed: bool,
    pub seed: u64,
}

/// Erdős–Rényi graph with edge probability `avg_degree / (nodes - 1)`, every
/// edge `+1` and then flipped to `-1` with probability `negative_fraction`.
///
/// Pairs are visited by geometric skipping, so generation costs O(n + m)
/// rather than O(n²).
pub fn generate_er_signed(cfg: &ErConfig) -> Result<SignedGraph, GraphError> {
    let n = cfg.nodes;
    if n < 2 {
        return Err(GraphError::InvalidParameter(format!("need at least 2 nodes, got {n}")));
    }
    if !(cfg.avg_degree >= 0.0 && cfg.avg_degree < n as f64) {
        return Err(GraphError::InvalidParameter(format!("average degree {} must lie in [0, {n})", cfg.avg_degree)));
    }
    if !(0.0..=1.0).contains(&cfg.negative_fraction) {
        return Err(GraphError::InvalidParameter(format!(
            "negative fraction {} must lie in [0, 1]",
            cfg.negative_fraction
        )));
    }
    let p = (cfg.avg_degree / (n - 1) as f64).min(1.0);
    let mut rng = rng::stream(cfg.seed, Stream::Generate, 0);
    let mut edges = Vec::with_capacity((p * (n * (n - 1)) as f64 / 2.0 * 1.1) as usize + 16);
    if p > 0.0 {
        let log_q = (1.0 - p).ln();
        // Batagelj & Brandes: enumerate pairs (v, w), w < v, skipping
        // geometrically distributed gaps.
        let mut v: usize = 1;
        let mut w: i64 = -1;
        while v < n {
            let skip = if p >= 1.0 {
                0
            } else {
                let r: f64 = rng.gen();
                ((1.0 - r).ln() / log_q).floor() as i64
            };
            w += 1 + skip;
            while w >= v as i64 && v < n {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                edges.push((w as usize, v));
            }
        }
    }
    let edges = edges.into_iter().map(|(a, b)| {
        let (src, dst) = if cfg.directed && rng.gen::<bool>() { (b, a) } else { (a, b) };
        let weight = if rng.gen::<f64>() < cfg.negative_fraction { -1 } else { 1 };
        Edge::new(src, dst, weight)
    });
    let edges: Vec<Edge> = edges.collect();
    Ok(SignedGraph::from_validated(n, cfg.directed, edges))
}

/// Parameters of the two-community benchmark: intra-community edges are
/// positive, inter-community edges negative.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoCommunityConfig {
    pub nodes: usize,
    /// Expected number of positive neighbors per node.
    pub intra_degree: f64,
    /// Expected number of negative neighbors per node.
    pub inter_degree: f64,
    pub directed: bool,
    pub seed: u64,
}

impl Default for TwoCommunityConfig {
    fn default() -> Self {
        TwoCommunityConfig { nodes: 200, intra_degree: 8.0, inter_degree: 4.0, directed: false, seed: 0 }
    }
}

/// Balanced-by-construction graph with two equal communities. Nodes
/// `0..n/2` form community 0; the returned labels are the community ids.
pub fn two_community(cfg: &TwoCommunityConfig) -> Result<(SignedGraph, NodeLabels), GraphError> {
    let n = cfg.nodes;
    if n < 4 || !n.is_multiple_of(2) {
        return Err(GraphError::InvalidParameter(format!(
            "two-community graph needs an even node count >= 4, got {n}"
        )));
    }
    let half = n / 2;
    let p_in = cfg.intra_degree / (half - 1) as f64;
    let p_out = cfg.inter_degree / half as f64;
    if !(0.0..=1.0).contains(&p_in) || !(0.0..=1.0).contains(&p_out) {
        return Err(GraphError::InvalidParameter("degrees too large for node count".into()));
    }
    let community = |v: usize| (v >= half) as i64;
    let mut rng = rng::stream(cfg.seed, Stream::Generate, 1);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let same = community(a) == community(b);
            if rng.gen::<f64>() < if same { p_in } else { p_out } {
                let (src, dst) = if cfg.directed && rng.gen::<bool>() { (b, a) } else { (a, b) };
                edges.push(Edge::new(src, dst, if same { 1 } else { -1 }));
            }
        }
    }
    let labels = (0..n).map(|v| (v, community(v))).collect();
    Ok((SignedGraph::from_validated(n, cfg.directed, edges), labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn er(n: usize, d: f64, neg: f64, seed: u64) -> SignedGraph {
        generate_er_signed(&ErConfig { nodes: n, avg_degree: d, negative_fraction: neg, directed: false, seed })
            .unwrap()
    }

    #[test]
    fn er_counts_within_three_sigma() {
        for seed in 0..3 {
            let g = er(1000, 10.0, 0.2, seed);
            let pairs: f64 = 1000.0 * 999.0 / 2.0;
            let p = 10.0 / 999.0;
            let sigma = (pairs * p * (1.0 - p)).sqrt();
            let m = g.edge_count() as f64;
            assert!((m - 5000.0).abs() < 3.0 * sigma, "edges {m}");
            let frac = g.negative_edge_count() as f64 / m;
            let sigma_f = (0.2f64 * 0.8 / m).sqrt();
            assert!((frac - 0.2).abs() < 3.0 * sigma_f, "fraction {frac}");
        }
    }

    #[test]
    fn er_sign_fraction_converges() {
        let mean: f64 = (0..10)
            .map(|seed| {
                let g = er(10_000, 10.0, 0.2, seed);
                g.negative_edge_count() as f64 / g.edge_count() as f64
            })
            .sum::<f64>()
            / 10.0;
        assert!((mean - 0.2).abs() < 0.01, "{mean}");
    }

    #[test]
    fn er_edges_are_valid_pairs() {
        let g = er(300, 20.0, 0.5, 9);
        // from_validated skips checks; re-validate through the public path.
        let again = SignedGraph::from_edges(300, false, g.edges().iter().copied()).unwrap();
        assert_eq!(again.edge_count(), g.edge_count());
    }

    #[test]
    fn er_degenerate_and_deterministic() {
        assert_eq!(er(500, 6.0, 0.0, 3).negative_edge_count(), 0);
        assert_eq!(er(500, 6.0, 0.3, 3), er(500, 6.0, 0.3, 3));
        assert_ne!(er(500, 6.0, 0.3, 3).edges(), er(500, 6.0, 0.3, 4).edges());
        // Complete graph when the degree reaches n - 1.
        assert_eq!(er(6, 5.5, 0.0, 0).edge_count(), 15);
    }

    #[test]
    fn er_rejects_bad_parameters() {
        let base = ErConfig { nodes: 10, avg_degree: 3.0, negative_fraction: 0.2, directed: false, seed: 0 };
        assert!(generate_er_signed(&ErConfig { nodes: 1, ..base.clone() }).is_err());
        assert!(generate_er_signed(&ErConfig { avg_degree: 10.0, ..base.clone() }).is_err());
        assert!(generate_er_signed(&ErConfig { negative_fraction: 1.5, ..base.clone() }).is_err());
    }

    #[test]
    fn two_community_signs_follow_labels() {
        let (g, labels) = two_community(&TwoCommunityConfig { seed: 5, ..Default::default() }).unwrap();
        assert_eq!(g.node_count(), 200);
        for e in g.edges() {
            assert_eq!(e.weight > 0, labels[&e.src] == labels[&e.dst]);
        }
        let mean_deg = 2.0 * g.edge_count() as f64 / 200.0;
        assert!((mean_deg - 12.0).abs() < 1.5, "{mean_deg}");
    }
}
