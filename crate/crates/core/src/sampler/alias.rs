//! Walker/Vose alias table: O(m) construction, O(1) draws.

use rand::Rng;

use super::SamplerError;
use crate::graph::{Edge, SignedGraph};

#[derive(Debug, Clone)]
pub struct AliasTable {
    prob: Vec<f64>,
    alias: Vec<usize>,
    total: f64,
}

impl AliasTable {
    pub fn new(weights: &[f64]) -> Result<Self, SamplerError> {
        let m = weights.len();
        if m == 0 {
            return Err(SamplerError::EmptyTable);
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(SamplerError::InvalidWeight);
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(SamplerError::InvalidWeight);
        }
        let mut prob: Vec<f64> = weights.iter().map(|w| w * m as f64 / total).collect();
        let mut alias: Vec<usize> = (0..m).collect();
        let (mut small, mut large): (Vec<usize>, Vec<usize>) = (0..m).partition(|&k| prob[k] < 1.0);
        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            alias[s] = l;
            prob[l] -= 1.0 - prob[s];
            if prob[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        // Leftovers are 1 up to rounding.
        for k in small.into_iter().chain(large) {
            prob[k] = 1.0;
        }
        Ok(AliasTable { prob, alias, total })
    }

    pub fn len(&self) -> usize {
        self.prob.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prob.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.total
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let k = rng.gen_range(0..self.prob.len());
        if rng.gen::<f64>() < self.prob[k] {
            k
        } else {
            self.alias[k]
        }
    }

    /// Exact draw probability of outcome `k` implied by the table.
    pub fn probability(&self, k: usize) -> f64 {
        let m = self.prob.len() as f64;
        let own = self.prob[k];
        let borrowed: f64 =
            (0..self.prob.len()).filter(|&c| self.alias[c] == k && c != k).map(|c| 1.0 - self.prob[c]).sum();
        (own + borrowed) / m
    }
}

/// Alias table over the edges of `graph`, weighted by magnitude `|w|`.
pub fn build_edge_alias(graph: &SignedGraph) -> Result<AliasTable, SamplerError> {
    let weights: Vec<f64> = graph.edges().iter().map(|e| e.magnitude() as f64).collect();
    AliasTable::new(&weights)
}

#[inline]
pub fn draw_edge<R: Rng + ?Sized>(table: &AliasTable, graph: &SignedGraph, rng: &mut R) -> Edge {
    graph.edges()[table.sample(rng)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{self, Stream};
    use proptest::prelude::*;

    #[test]
    fn two_edges_one_to_three() {
        let g = SignedGraph::from_edges(3, true, [Edge::new(0, 1, 1), Edge::new(1, 2, -3)]).unwrap();
        let t = build_edge_alias(&g).unwrap();
        assert!((t.probability(0) - 0.25).abs() < 1e-12);
        assert!((t.probability(1) - 0.75).abs() < 1e-12);
        let mut r = rng::stream(1, Stream::Training, 0);
        let draws = 1_000_000;
        let mut hits = 0usize;
        for _ in 0..draws {
            if draw_edge(&t, &g, &mut r).dst == 2 {
                hits += 1;
            }
        }
        let freq = hits as f64 / draws as f64;
        assert!((freq - 0.75).abs() < 0.005, "{freq}");
    }

    #[test]
    fn single_and_uniform() {
        let t = AliasTable::new(&[4.0]).unwrap();
        let mut r = rng::stream(2, Stream::Training, 0);
        assert!((0..100).all(|_| t.sample(&mut r) == 0));
        let u = AliasTable::new(&[2.0; 5]).unwrap();
        for k in 0..5 {
            assert!((u.probability(k) - 0.2).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_empty_and_bad_weights() {
        assert!(matches!(AliasTable::new(&[]), Err(SamplerError::EmptyTable)));
        assert!(matches!(AliasTable::new(&[1.0, -1.0]), Err(SamplerError::InvalidWeight)));
        assert!(matches!(AliasTable::new(&[0.0, 0.0]), Err(SamplerError::InvalidWeight)));
        let empty = SignedGraph::from_edges(2, true, []).unwrap();
        assert!(build_edge_alias(&empty).is_err());
    }

    proptest! {
        #[test]
        fn probabilities_match_weights(weights in proptest::collection::vec(1u32..50, 1..40)) {
            let w: Vec<f64> = weights.iter().map(|&x| x as f64).collect();
            let t = AliasTable::new(&w).unwrap();
            let total: f64 = w.iter().sum();
            for (k, wk) in w.iter().enumerate() {
                prop_assert!((t.probability(k) - wk / total).abs() < 1e-9);
            }
        }
    }
}
