//! Multinomial naive Bayes over non-negative real features with Laplace smoothing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::neo::TraitLabel;

/// Smoothing on the scale of per-class TF-IDF mass; `1.0` swamps features
/// whose rows sum to well under one.
pub const DEFAULT_ALPHA: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NBModel {
    pub alpha: f64,
    /// Classes seen in training, canonical order.
    pub classes: Vec<TraitLabel>,
    pub log_prior: Vec<f64>,
    /// `log_likelihood[c][j]` for class `classes[c]` and column `j`.
    pub log_likelihood: Vec<Vec<f64>>,
}

impl NBModel {
    pub fn n_cols(&self) -> usize {
        self.log_likelihood.first().map_or(0, Vec::len)
    }
}

pub fn train_nb(x: &[Vec<f64>], y: &[TraitLabel], alpha: f64) -> Result<NBModel> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::validation(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    if x.is_empty() || x.len() != y.len() {
        return Err(Error::validation(format!(
            "{} rows but {} labels",
            x.len(),
            y.len()
        )));
    }
    let n_cols = x[0].len();
    if n_cols == 0 {
        return Err(Error::validation("feature rows have no columns"));
    }
    for (i, row) in x.iter().enumerate() {
        if row.len() != n_cols {
            return Err(Error::validation(format!(
                "row {i} has {} columns, expected {n_cols}",
                row.len()
            )));
        }
        if let Some(v) = row.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::validation(format!(
                "row {i} has negative or non-finite feature {v}"
            )));
        }
    }

    let mut mass = [0.0f64; 5].map(|_| vec![0.0; n_cols]);
    let mut class_rows = [0usize; 5];
    for (row, label) in x.iter().zip(y) {
        class_rows[label.index()] += 1;
        for (acc, v) in mass[label.index()].iter_mut().zip(row) {
            *acc += v;
        }
    }

    let n = x.len() as f64;
    let mut model = NBModel {
        alpha,
        classes: vec![],
        log_prior: vec![],
        log_likelihood: vec![],
    };
    for label in TraitLabel::ALL {
        let rows = class_rows[label.index()];
        if rows == 0 {
            continue;
        }
        let col_mass = &mass[label.index()];
        let denom = col_mass.iter().sum::<f64>() + alpha * n_cols as f64;
        model.classes.push(label);
        model.log_prior.push((rows as f64 / n).ln());
        model.log_likelihood.push(
            col_mass
                .iter()
                .map(|m| ((m + alpha) / denom).ln())
                .collect(),
        );
    }
    Ok(model)
}

/// Predicted label and posterior over all five traits (zero for unseen classes).
pub fn predict_nb(m: &NBModel, row: &[f64]) -> Result<(TraitLabel, [f64; 5])> {
    if m.classes.is_empty() {
        return Err(Error::validation("naive Bayes model has no classes"));
    }
    if row.len() != m.n_cols() {
        return Err(Error::validation(format!(
            "row has {} columns, model expects {}",
            row.len(),
            m.n_cols()
        )));
    }
    let scores: Vec<f64> = m
        .log_prior
        .iter()
        .zip(&m.log_likelihood)
        .map(|(prior, ll)| prior + row.iter().zip(ll).map(|(v, l)| v * l).sum::<f64>())
        .collect();
    let mut best = 0;
    for (i, s) in scores.iter().enumerate().skip(1) {
        if *s > scores[best] {
            best = i;
        }
    }
    let max = scores[best];
    let z: f64 = scores.iter().map(|s| (s - max).exp()).sum();
    let mut posterior = [0.0; 5];
    for (label, s) in m.classes.iter().zip(&scores) {
        posterior[label.index()] = (s - max).exp() / z;
    }
    Ok((m.classes[best], posterior))
}
