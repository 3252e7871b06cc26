//! One ascent step on the per-edge objective
//!
//! `O_ij = ln σ(s_ij ⟨c_j, x_i⟩) + Σ_n ln σ(s̃_in ⟨c_n, x_i⟩)`
//!
//! where `c` is the context vector in directed mode and the node vector
//! itself in undirected mode.

use super::embedding::{EmbeddingMatrix, Params, Table};
use super::sigmoid::{Activation, Logistic};
use super::TrainError;
use crate::graph::{NodeId, Sign};

/// Working buffers for [`step`], sized to the parameter dimension.
pub(crate) struct StepScratch {
    xi: Vec<f64>,
    c: Vec<f64>,
    dx: Vec<f64>,
    delta: Vec<f64>,
    grads: Vec<f64>,
}

impl StepScratch {
    pub(crate) fn new(dim: usize) -> Self {
        StepScratch {
            xi: vec![0.0; dim],
            c: vec![0.0; dim],
            dx: vec![0.0; dim],
            delta: vec![0.0; dim],
            grads: Vec::new(),
        }
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gradient step for `i` against `terms` (the edge partner first, then the
/// sampled nodes). All term gradients are evaluated at the pre-update
/// parameters; returns the objective at those parameters.
#[inline]
pub(crate) fn step<P: Params>(
    params: &mut P,
    i: NodeId,
    terms: impl Iterator<Item = (NodeId, Sign)> + Clone,
    rho: f64,
    logistic: &Logistic,
    s: &mut StepScratch,
) -> Result<f64, TrainError> {
    params.read(Table::Vectors, i, &mut s.xi);
    s.dx.iter_mut().for_each(|v| *v = 0.0);
    s.grads.clear();
    let mut objective = 0.0;
    for (node, sign) in terms.clone() {
        params.read(Table::Contexts, node, &mut s.c);
        let t = sign.value();
        let a = dot(&s.c, &s.xi);
        if !a.is_finite() {
            return Err(TrainError::Diverged { node: i });
        }
        let (sig, ln_sig) = logistic.eval(t * a);
        objective += ln_sig;
        let g = rho * t * (1.0 - sig);
        s.grads.push(g);
        for (d, c) in s.dx.iter_mut().zip(&s.c) {
            *d += g * c;
        }
    }
    for ((node, _), &g) in terms.zip(&s.grads) {
        for (d, x) in s.delta.iter_mut().zip(&s.xi) {
            *d = g * x;
        }
        params.add(Table::Contexts, node, &s.delta);
    }
    params.add(Table::Vectors, i, &s.dx);
    Ok(objective)
}

/// Applies one ascent step for edge `(i, j)` with sign `edge_sign` and the
/// given samples, each carrying its estimated sign. Returns `O_ij` at the
/// pre-update parameters.
pub fn edge_update(
    emb: &mut EmbeddingMatrix,
    i: NodeId,
    j: NodeId,
    edge_sign: Sign,
    samples: &[(NodeId, Sign)],
    rho: f64,
    activation: &Activation,
) -> Result<f64, TrainError> {
    let logistic = Logistic::from(activation);
    let mut scratch = StepScratch::new(emb.dim());
    let terms = std::iter::once((j, edge_sign)).chain(samples.iter().copied());
    step(emb, i, terms, rho, &logistic, &mut scratch)
}

/// `σ(s ⟨c, x⟩)` with the clamped logistic function.
pub fn pair_score(x: &[f64], c: &[f64], sign: Sign) -> Result<f64, TrainError> {
    if x.len() != c.len() {
        return Err(TrainError::DimensionMismatch { left: x.len(), right: c.len() });
    }
    Ok(super::sigmoid::sigmoid(sign.value() * dot(c, x)))
}
