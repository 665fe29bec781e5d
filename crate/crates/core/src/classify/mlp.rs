//! One-hidden-layer perceptron: ReLU hidden units, softmax over the five
//! traits, mean cross-entropy loss, full-batch gradient descent.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::neo::TraitLabel;

pub const N_CLASSES: usize = 5;

/// TF-IDF inputs are small (mostly below 0.1), so the step size is large.
pub const DEFAULT_LR: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MlpHyper {
    pub hidden_size: usize,
    pub lr: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for MlpHyper {
    fn default() -> Self {
        MlpHyper {
            hidden_size: 64,
            lr: DEFAULT_LR,
            epochs: 200,
            seed: 0,
        }
    }
}

/// Weights are row-major: `w1` is `hidden x input`, `w2` is `5 x hidden`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MLPModel {
    pub hidden_size: usize,
    pub seed: u64,
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

/// Gradient of the mean loss, laid out like [`MLPModel`].
#[derive(Debug, Clone, PartialEq)]
pub struct MlpGradients {
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

impl MlpGradients {
    pub fn norm(&self) -> f64 {
        self.parts()
            .iter()
            .flat_map(|p| p.iter())
            .map(|g| g * g)
            .sum::<f64>()
            .sqrt()
    }

    pub fn parts(&self) -> [&[f64]; 4] {
        [&self.w1, &self.b1, &self.w2, &self.b2]
    }
}

struct Forward {
    pre: Vec<f64>,
    hidden: Vec<f64>,
    probs: [f64; N_CLASSES],
}

impl MLPModel {
    /// Uniform(-b, b) weights with `b = sqrt(6 / (fan_in + fan_out))`, zero biases.
    pub fn init(input_size: usize, hidden_size: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut layer = |fan_in: usize, fan_out: usize| -> Vec<f64> {
            let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
            (0..fan_in * fan_out)
                .map(|_| rng.gen_range(-bound..=bound))
                .collect()
        };
        let w1 = layer(input_size, hidden_size);
        let w2 = layer(hidden_size, N_CLASSES);
        MLPModel {
            hidden_size,
            seed,
            w1,
            b1: vec![0.0; hidden_size],
            w2,
            b2: vec![0.0; N_CLASSES],
        }
    }

    pub fn input_size(&self) -> usize {
        self.w1.len().checked_div(self.hidden_size).unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        let h = self.hidden_size;
        let ok = h > 0
            && self.w1.len().is_multiple_of(h)
            && self.b1.len() == h
            && self.w2.len() == N_CLASSES * h
            && self.b2.len() == N_CLASSES;
        if ok {
            Ok(())
        } else {
            Err(Error::validation("MLP weight shapes are inconsistent"))
        }
    }

    pub fn parts_mut(&mut self) -> [&mut Vec<f64>; 4] {
        [&mut self.w1, &mut self.b1, &mut self.w2, &mut self.b2]
    }

    fn forward(&self, x: &[f64]) -> Forward {
        let n_in = x.len();
        let pre: Vec<f64> = (0..self.hidden_size)
            .map(|h| {
                let w = &self.w1[h * n_in..(h + 1) * n_in];
                self.b1[h] + w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()
            })
            .collect();
        let hidden: Vec<f64> = pre.iter().map(|v| v.max(0.0)).collect();
        let mut logits = [0.0; N_CLASSES];
        for (k, z) in logits.iter_mut().enumerate() {
            let w = &self.w2[k * self.hidden_size..(k + 1) * self.hidden_size];
            *z = self.b2[k] + w.iter().zip(&hidden).map(|(a, b)| a * b).sum::<f64>();
        }
        Forward {
            pre,
            hidden,
            probs: softmax(&logits),
        }
    }

    fn check_input(&self, x: &[Vec<f64>], y: Option<&[TraitLabel]>) -> Result<()> {
        self.validate()?;
        if let Some(y) = y {
            if x.len() != y.len() || x.is_empty() {
                return Err(Error::validation(format!(
                    "{} rows but {} labels",
                    x.len(),
                    y.len()
                )));
            }
        }
        let n_in = self.input_size();
        for (i, row) in x.iter().enumerate() {
            if row.len() != n_in {
                return Err(Error::validation(format!(
                    "row {i} has {} columns, model expects {n_in}",
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::validation(format!(
                    "row {i} has a non-finite feature"
                )));
            }
        }
        Ok(())
    }
}

fn softmax(logits: &[f64; N_CLASSES]) -> [f64; N_CLASSES] {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps = logits.map(|z| (z - max).exp());
    let sum: f64 = exps.iter().sum();
    exps.map(|e| e / sum)
}

/// Mean cross-entropy of `m` over the batch.
pub fn mlp_loss(m: &MLPModel, x: &[Vec<f64>], y: &[TraitLabel]) -> Result<f64> {
    m.check_input(x, Some(y))?;
    let total: f64 = x
        .iter()
        .zip(y)
        .map(|(row, label)| -m.forward(row).probs[label.index()].ln())
        .sum();
    Ok(total / x.len() as f64)
}

/// Analytic gradients of the mean cross-entropy.
#[allow(clippy::needless_range_loop)]
pub fn mlp_gradients(m: &MLPModel, x: &[Vec<f64>], y: &[TraitLabel]) -> Result<MlpGradients> {
    m.check_input(x, Some(y))?;
    let n_in = m.input_size();
    let hs = m.hidden_size;
    let mut g = MlpGradients {
        w1: vec![0.0; m.w1.len()],
        b1: vec![0.0; hs],
        w2: vec![0.0; m.w2.len()],
        b2: vec![0.0; N_CLASSES],
    };
    let scale = 1.0 / x.len() as f64;
    for (row, label) in x.iter().zip(y) {
        let f = m.forward(row);
        let mut dz = f.probs;
        dz[label.index()] -= 1.0;
        for d in dz.iter_mut() {
            *d *= scale;
        }
        let mut dh = vec![0.0; hs];
        for k in 0..N_CLASSES {
            g.b2[k] += dz[k];
            for h in 0..hs {
                g.w2[k * hs + h] += dz[k] * f.hidden[h];
                dh[h] += m.w2[k * hs + h] * dz[k];
            }
        }
        for h in 0..hs {
            if f.pre[h] <= 0.0 {
                continue;
            }
            g.b1[h] += dh[h];
            for (j, v) in row.iter().enumerate() {
                g.w1[h * n_in + j] += dh[h] * v;
            }
        }
    }
    Ok(g)
}

pub fn train_mlp(x: &[Vec<f64>], y: &[TraitLabel], hyper: &MlpHyper) -> Result<MLPModel> {
    train_mlp_with_history(x, y, hyper).map(|(m, _)| m)
}

/// Trains and also returns the loss before each epoch's update plus the final loss.
pub fn train_mlp_with_history(
    x: &[Vec<f64>],
    y: &[TraitLabel],
    hyper: &MlpHyper,
) -> Result<(MLPModel, Vec<f64>)> {
    if hyper.hidden_size == 0 {
        return Err(Error::validation("hidden_size must be positive"));
    }
    if !(hyper.lr > 0.0 && hyper.lr.is_finite()) {
        return Err(Error::validation(format!(
            "learning rate must be positive, got {}",
            hyper.lr
        )));
    }
    let first = x
        .first()
        .ok_or_else(|| Error::validation("no training rows"))?;
    let mut distinct: Vec<TraitLabel> = y.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::validation("MLP training needs at least two classes"));
    }
    let mut model = MLPModel::init(first.len(), hyper.hidden_size, hyper.seed);
    model.check_input(x, Some(y))?;
    let mut history = Vec::with_capacity(hyper.epochs + 1);
    for _ in 0..hyper.epochs {
        history.push(mlp_loss(&model, x, y)?);
        let g = mlp_gradients(&model, x, y)?;
        for (param, grad) in model.parts_mut().into_iter().zip(g.parts()) {
            for (p, d) in param.iter_mut().zip(grad) {
                *p -= hyper.lr * d;
            }
        }
    }
    history.push(mlp_loss(&model, x, y)?);
    Ok((model, history))
}

pub fn predict_mlp(m: &MLPModel, row: &[f64]) -> Result<(TraitLabel, [f64; N_CLASSES])> {
    m.validate()?;
    if row.len() != m.input_size() {
        return Err(Error::validation(format!(
            "row has {} columns, model expects {}",
            row.len(),
            m.input_size()
        )));
    }
    let probs = m.forward(row).probs;
    let mut best = 0;
    for k in 1..N_CLASSES {
        if probs[k] > probs[best] {
            best = k;
        }
    }
    Ok((TraitLabel::ALL[best], probs))
}
