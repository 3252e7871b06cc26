//! L2-regularized logistic regression fitted by full-batch gradient descent.
//!
//! Features are standardized with the training mean and standard deviation
//! before fitting; the stored model applies the same transform at
//! prediction time. Step sizes come from Armijo backtracking, so the
//! training loss never increases between epochs.

use super::EvalError;
use crate::trainer::sigmoid_exact;

#[derive(Debug, Clone, PartialEq)]
pub struct LogRegConfig {
    /// Penalty `λ/2 ‖w‖²` added to the mean log-loss; the bias is not penalized.
    pub lambda: f64,
    pub max_epochs: usize,
    /// Stop when an epoch improves the loss by less than this.
    pub tolerance: f64,
    /// First step size tried by the line search.
    pub initial_step: f64,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        LogRegConfig { lambda: 1e-4, max_epochs: 500, tolerance: 1e-6, initial_step: 1.0 }
    }
}

/// Binary classifier; predicts class 1 iff `σ(w·z + b) ≥ 0.5` where `z` is
/// the standardized feature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRegModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub lambda: f64,
    mean: Vec<f64>,
    scale: Vec<f64>,
}

impl LogRegModel {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn decision(&self, x: &[f64]) -> f64 {
        self.bias
            + x.iter()
                .zip(&self.mean)
                .zip(&self.scale)
                .zip(&self.weights)
                .map(|(((v, m), s), w)| w * (v - m) / s)
                .sum::<f64>()
    }

    pub fn probability(&self, x: &[f64]) -> f64 {
        sigmoid_exact(self.decision(x))
    }

    pub fn predict(&self, x: &[f64]) -> bool {
        self.probability(x) >= 0.5
    }
}

/// Fitted model plus the loss at the start and after every epoch.
#[derive(Debug, Clone)]
pub struct LogRegFit {
    pub model: LogRegModel,
    pub loss_trace: Vec<f64>,
}

fn check_rows(rows: &[Vec<f64>], labels_len: usize) -> Result<usize, EvalError> {
    if rows.is_empty() {
        return Err(EvalError::NoData);
    }
    if rows.len() != labels_len {
        return Err(EvalError::DimensionMismatch { left: rows.len(), right: labels_len });
    }
    let d = rows[0].len();
    if let Some(r) = rows.iter().find(|r| r.len() != d) {
        return Err(EvalError::DimensionMismatch { left: d, right: r.len() });
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(EvalError::NonFinite);
    }
    Ok(d)
}

/// `log(1 + e^-m)` without overflow.
fn log_loss(margin: f64) -> f64 {
    if margin > 0.0 {
        (-margin).exp().ln_1p()
    } else {
        -margin + margin.exp().ln_1p()
    }
}

struct Problem<'a> {
    z: &'a [Vec<f64>],
    y: &'a [f64],
    lambda: f64,
}

impl Problem<'_> {
    fn loss(&self, w: &[f64], b: f64) -> f64 {
        let data: f64 =
            self.z.iter().zip(self.y).map(|(z, &y)| log_loss(y * (b + dot(w, z)))).sum::<f64>() / self.z.len() as f64;
        data + 0.5 * self.lambda * dot(w, w)
    }

    fn gradient(&self, w: &[f64], b: f64, gw: &mut [f64]) -> f64 {
        let n = self.z.len() as f64;
        gw.iter_mut().zip(w).for_each(|(g, w)| *g = self.lambda * w);
        let mut gb = 0.0;
        for (z, &y) in self.z.iter().zip(self.y) {
            let coef = -y * sigmoid_exact(-y * (b + dot(w, z))) / n;
            gb += coef;
            gw.iter_mut().zip(z).for_each(|(g, v)| *g += coef * v);
        }
        gb
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Fits a binary model. Deterministic: the optimizer uses no randomness.
pub fn train_logreg(rows: &[Vec<f64>], labels: &[bool], cfg: &LogRegConfig) -> Result<LogRegFit, EvalError> {
    let d = check_rows(rows, labels.len())?;
    if labels.iter().all(|&l| l) || labels.iter().all(|&l| !l) {
        return Err(EvalError::SingleClass);
    }
    if !(cfg.lambda >= 0.0 && cfg.lambda.is_finite()) || cfg.initial_step.is_nan() || cfg.initial_step <= 0.0 {
        return Err(EvalError::InvalidConfig(format!("bad regression settings {cfg:?}")));
    }
    let n = rows.len() as f64;
    let mut mean = vec![0.0; d];
    for r in rows {
        mean.iter_mut().zip(r).for_each(|(m, v)| *m += v / n);
    }
    let mut scale = vec![0.0; d];
    for r in rows {
        scale.iter_mut().zip(r).zip(&mean).for_each(|((s, v), m)| *s += (v - m) * (v - m) / n);
    }
    scale.iter_mut().for_each(|s| *s = if *s > 1e-24 { s.sqrt() } else { 1.0 });
    let z: Vec<Vec<f64>> =
        rows.iter().map(|r| r.iter().zip(&mean).zip(&scale).map(|((v, m), s)| (v - m) / s).collect()).collect();
    let y: Vec<f64> = labels.iter().map(|&l| if l { 1.0 } else { -1.0 }).collect();
    let problem = Problem { z: &z, y: &y, lambda: cfg.lambda };

    // Start from the intercept-only optimum.
    let positives = labels.iter().filter(|&&l| l).count() as f64;
    let mut w = vec![0.0; d];
    let mut b = (positives / (n - positives)).ln();
    let mut gw = vec![0.0; d];
    let mut trial = vec![0.0; d];
    let mut loss = problem.loss(&w, b);
    let mut trace = vec![loss];
    let mut step = cfg.initial_step;
    for _ in 0..cfg.max_epochs {
        let gb = problem.gradient(&w, b, &mut gw);
        let g2 = dot(&gw, &gw) + gb * gb;
        if g2 == 0.0 {
            break;
        }
        let mut accepted = None;
        while step > 1e-12 {
            trial.iter_mut().zip(&w).zip(&gw).for_each(|((t, w), g)| *t = w - step * g);
            let tb = b - step * gb;
            let l = problem.loss(&trial, tb);
            if l <= loss - 0.5 * step * g2 {
                accepted = Some((tb, l));
                break;
            }
            step *= 0.5;
        }
        let Some((tb, l)) = accepted else { break };
        std::mem::swap(&mut w, &mut trial);
        b = tb;
        let improvement = loss - l;
        loss = l;
        trace.push(loss);
        step *= 2.0;
        if improvement < cfg.tolerance {
            break;
        }
    }
    Ok(LogRegFit { model: LogRegModel { weights: w, bias: b, lambda: cfg.lambda, mean, scale }, loss_trace: trace })
}

/// One-vs-rest wrapper for integer class labels.
#[derive(Debug, Clone)]
pub struct MultiClassModel {
    classes: Vec<i64>,
    binary: Vec<LogRegModel>,
}

impl MultiClassModel {
    /// Classes seen in training, in ascending order.
    pub fn classes(&self) -> &[i64] {
        &self.classes
    }

    pub fn predict(&self, x: &[f64]) -> i64 {
        if self.binary.len() == 1 {
            return self.classes[usize::from(self.binary[0].predict(x))];
        }
        let best = self
            .binary
            .iter()
            .enumerate()
            .map(|(k, m)| (k, m.decision(x)))
            .fold((0, f64::NEG_INFINITY), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        self.classes[best.0]
    }
}

/// Fits one binary model for two classes, one model per class otherwise.
pub fn train_multiclass(rows: &[Vec<f64>], labels: &[i64], cfg: &LogRegConfig) -> Result<MultiClassModel, EvalError> {
    let mut classes = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() < 2 {
        return Err(EvalError::SingleClass);
    }
    let binary = if classes.len() == 2 {
        let y: Vec<bool> = labels.iter().map(|&l| l == classes[1]).collect();
        vec![train_logreg(rows, &y, cfg)?.model]
    } else {
        classes
            .iter()
            .map(|&c| {
                let y: Vec<bool> = labels.iter().map(|&l| l == c).collect();
                train_logreg(rows, &y, cfg).map(|f| f.model)
            })
            .collect::<Result<_, _>>()?
    };
    Ok(MultiClassModel { classes, binary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn blobs(n: usize, gap: f64, seed: u64) -> (Vec<Vec<f64>>, Vec<bool>) {
        let mut rng = crate::rng::stream(seed, crate::rng::Stream::Generate, 0);
        (0..n)
            .map(|k| {
                let pos = k % 2 == 0;
                let c = if pos { gap } else { -gap };
                (vec![c + rng.gen_range(-1.0..1.0), c + rng.gen_range(-1.0..1.0)], pos)
            })
            .unzip()
    }

    #[test]
    fn separable_blobs_are_fit_exactly() {
        let (x, y) = blobs(60, 2.0, 1);
        let fit = train_logreg(&x, &y, &LogRegConfig::default()).unwrap();
        let acc = x.iter().zip(&y).filter(|(r, &l)| fit.model.predict(r) == l).count();
        assert_eq!(acc, 60);
    }

    #[test]
    fn loss_never_increases() {
        let (x, y) = blobs(20, 0.3, 5);
        let fit = train_logreg(&x, &y, &LogRegConfig::default()).unwrap();
        assert!(fit.loss_trace.len() > 2);
        for w in fit.loss_trace.windows(2) {
            assert!(w[1] <= w[0], "{:?}", fit.loss_trace);
        }
    }

    #[test]
    fn heavy_penalty_predicts_the_majority() {
        let (mut x, mut y) = blobs(30, 1.0, 2);
        x.truncate(25);
        y.truncate(25); // 13 positives, 12 negatives
        let cfg = LogRegConfig { lambda: 1e9, ..LogRegConfig::default() };
        let fit = train_logreg(&x, &y, &cfg).unwrap();
        assert!(fit.model.weights.iter().all(|w| w.abs() < 1e-6));
        assert!(x.iter().all(|r| fit.model.predict(r)));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(train_logreg(&[vec![1.0]], &[true], &LogRegConfig::default()), Err(EvalError::SingleClass)));
        assert!(matches!(train_logreg(&[], &[], &LogRegConfig::default()), Err(EvalError::NoData)));
        assert!(train_logreg(&[vec![1.0], vec![1.0, 2.0]], &[true, false], &LogRegConfig::default()).is_err());
    }

    #[test]
    fn constant_feature_is_harmless() {
        let x = vec![vec![1.0, 0.0], vec![1.0, 1.0], vec![1.0, 2.0], vec![1.0, 3.0]];
        let y = [false, false, true, true];
        let fit = train_logreg(&x, &y, &LogRegConfig::default()).unwrap();
        assert!(fit.model.weights.iter().all(|w| w.is_finite()));
        assert!(!fit.model.predict(&x[0]) && fit.model.predict(&x[3]));
    }

    #[test]
    fn three_classes() {
        let centers = [(-3.0, 0.0), (3.0, 0.0), (0.0, 4.0)];
        let mut rng = crate::rng::stream(3, crate::rng::Stream::Generate, 0);
        let mut x = Vec::new();
        let mut y = Vec::new();
        for k in 0..90 {
            let (cx, cy) = centers[k % 3];
            x.push(vec![cx + rng.gen_range(-1.0..1.0), cy + rng.gen_range(-1.0..1.0)]);
            y.push(10 * (k % 3) as i64);
        }
        let m = train_multiclass(&x, &y, &LogRegConfig::default()).unwrap();
        assert_eq!(m.classes(), &[0, 10, 20]);
        assert!(x.iter().zip(&y).all(|(r, &l)| m.predict(r) == l));
    }
}
