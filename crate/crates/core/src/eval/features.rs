//! Edge features built from the two endpoint embeddings.

use std::fmt;
use std::str::FromStr;

use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeFeatureOp {
    /// `f_i ⊕ f_j`, length 2K.
    Concat,
    /// `(f_i + f_j) / 2`.
    Avg,
    /// Elementwise product.
    Hadamard,
    /// Elementwise `|f_i - f_j|`.
    L1,
    /// Elementwise `(f_i - f_j)^2`.
    L2,
}

impl EdgeFeatureOp {
    pub const ALL: [EdgeFeatureOp; 5] =
        [EdgeFeatureOp::Concat, EdgeFeatureOp::Avg, EdgeFeatureOp::Hadamard, EdgeFeatureOp::L1, EdgeFeatureOp::L2];

    pub fn name(self) -> &'static str {
        match self {
            EdgeFeatureOp::Concat => "concat",
            EdgeFeatureOp::Avg => "avg",
            EdgeFeatureOp::Hadamard => "hadamard",
            EdgeFeatureOp::L1 => "l1",
            EdgeFeatureOp::L2 => "l2",
        }
    }

    pub fn output_dim(self, k: usize) -> usize {
        if self == EdgeFeatureOp::Concat {
            2 * k
        } else {
            k
        }
    }
}

impl fmt::Display for EdgeFeatureOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EdgeFeatureOp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        EdgeFeatureOp::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| format!("unknown operator `{s}` (expected concat, avg, hadamard, l1 or l2)"))
    }
}

/// Appends the features of `(f_i, f_j)` to `out`.
pub fn edge_features_into(fi: &[f64], fj: &[f64], op: EdgeFeatureOp, out: &mut Vec<f64>) -> Result<(), EvalError> {
    if fi.len() != fj.len() {
        return Err(EvalError::DimensionMismatch { left: fi.len(), right: fj.len() });
    }
    let pairs = fi.iter().zip(fj);
    match op {
        EdgeFeatureOp::Concat => {
            out.extend_from_slice(fi);
            out.extend_from_slice(fj);
        }
        EdgeFeatureOp::Avg => out.extend(pairs.map(|(a, b)| (a + b) / 2.0)),
        EdgeFeatureOp::Hadamard => out.extend(pairs.map(|(a, b)| a * b)),
        EdgeFeatureOp::L1 => out.extend(pairs.map(|(a, b)| (a - b).abs())),
        EdgeFeatureOp::L2 => out.extend(pairs.map(|(a, b)| (a - b) * (a - b))),
    }
    Ok(())
}

pub fn edge_features(fi: &[f64], fj: &[f64], op: EdgeFeatureOp) -> Result<Vec<f64>, EvalError> {
    let mut out = Vec::with_capacity(op.output_dim(fi.len()));
    edge_features_into(fi, fj, op, &mut out)?;
    Ok(out)
}
