//! Logistic function variants.

/// Arguments are clamped to `[-MAX_ARG, MAX_ARG]` outside of exact mode.
pub const MAX_ARG: f64 = 6.0;
const TABLE_BINS: usize = 1024;

/// Unclamped `1 / (1 + e^-a)`.
#[inline]
pub fn sigmoid_exact(a: f64) -> f64 {
    1.0 / (1.0 + (-a).exp())
}

/// Logistic function with the argument clamped to `[-6, 6]`.
#[inline]
pub fn sigmoid(a: f64) -> f64 {
    sigmoid_exact(a.clamp(-MAX_ARG, MAX_ARG))
}

/// Numerically stable `ln σ(a)`.
#[inline]
pub fn ln_sigmoid_exact(a: f64) -> f64 {
    if a >= 0.0 {
        -(-a).exp().ln_1p()
    } else {
        a - a.exp().ln_1p()
    }
}

/// Precomputed σ and ln σ on `[-6, 6]` with linear interpolation between
/// 1024 bins.
#[derive(Debug, Clone)]
pub struct SigmoidTable {
    values: Vec<f64>,
    logs: Vec<f64>,
}

impl Default for SigmoidTable {
    fn default() -> Self {
        let grid = |k: usize| -MAX_ARG + 2.0 * MAX_ARG * k as f64 / TABLE_BINS as f64;
        SigmoidTable {
            values: (0..=TABLE_BINS).map(|k| sigmoid_exact(grid(k))).collect(),
            logs: (0..=TABLE_BINS).map(|k| ln_sigmoid_exact(grid(k))).collect(),
        }
    }
}

impl SigmoidTable {
    #[inline]
    fn locate(a: f64) -> (usize, f64) {
        let pos = (a.clamp(-MAX_ARG, MAX_ARG) + MAX_ARG) * (TABLE_BINS as f64 / (2.0 * MAX_ARG));
        let k = (pos as usize).min(TABLE_BINS - 1);
        (k, pos - k as f64)
    }

    #[inline]
    pub fn sigmoid(&self, a: f64) -> f64 {
        let (k, frac) = Self::locate(a);
        self.values[k] + frac * (self.values[k + 1] - self.values[k])
    }

    #[inline]
    pub fn ln_sigmoid(&self, a: f64) -> f64 {
        let (k, frac) = Self::locate(a);
        self.logs[k] + frac * (self.logs[k + 1] - self.logs[k])
    }
}

/// Which logistic function the gradient step evaluates.
#[derive(Debug, Clone, Default)]
pub enum Activation {
    /// No clamp; used by gradient checks.
    Exact,
    /// Exact function on the clamped argument.
    Clamped,
    /// Clamped lookup table; the training default.
    #[default]
    Table,
}

/// Activation with its table materialized.
#[derive(Debug, Clone)]
pub(crate) enum Logistic {
    Exact,
    Clamped,
    Table(Box<SigmoidTable>),
}

impl From<&Activation> for Logistic {
    fn from(a: &Activation) -> Self {
        match a {
            Activation::Exact => Logistic::Exact,
            Activation::Clamped => Logistic::Clamped,
            Activation::Table => Logistic::Table(Box::default()),
        }
    }
}

impl Logistic {
    /// Returns `(σ(a), ln σ(a))`.
    #[inline]
    pub(crate) fn eval(&self, a: f64) -> (f64, f64) {
        match self {
            Logistic::Exact => (sigmoid_exact(a), ln_sigmoid_exact(a)),
            Logistic::Clamped => {
                let a = a.clamp(-MAX_ARG, MAX_ARG);
                (sigmoid_exact(a), ln_sigmoid_exact(a))
            }
            Logistic::Table(t) => (t.sigmoid(a), t.ln_sigmoid(a)),
        }
    }
}
