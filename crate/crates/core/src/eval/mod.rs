//! Evaluation arithmetic: message histogram, s-score accuracy, classifier
//! accuracy and recommendation satisfaction.

mod synth;

pub use synth::{gen_synthetic_corpus, SyntheticCorpus, SyntheticSpec};

use std::fmt::Write as _;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::classify::MatchResult;
use crate::error::{Error, Result};
use crate::ingest::MessageStore;
use crate::neo::TraitLabel;

/// Sender message counts, most active first, ties by sender id.
pub fn message_histogram(store: &MessageStore) -> Vec<(String, usize)> {
    let mut h: Vec<(String, usize)> = store
        .counts()
        .iter()
        .map(|(k, v)| (k.clone(), *v))
        .collect();
    h.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    h
}

/// `100 * sum(s) / (5 * n)` over matched pairs.
pub fn pairwise_accuracy(results: &[MatchResult]) -> Result<f64> {
    if results.is_empty() {
        return Err(Error::validation("no matched pairs to score"));
    }
    let mut sum = 0u64;
    for r in results {
        let s = r.s_score.ok_or_else(|| {
            Error::validation(format!(
                "pair {} -> {} has no s-score",
                r.test_id, r.best_train_id
            ))
        })?;
        sum += u64::from(s);
    }
    Ok(s_score_percentage(sum, results.len()))
}

pub(crate) fn s_score_percentage(s_sum: u64, pairs: usize) -> f64 {
    (100 * s_sum) as f64 / (5 * pairs) as f64
}

pub fn classifier_accuracy(predicted: &[TraitLabel], actual: &[TraitLabel]) -> Result<f64> {
    if predicted.is_empty() || predicted.len() != actual.len() {
        return Err(Error::validation(format!(
            "accuracy needs equal non-empty label lists, got {} and {}",
            predicted.len(),
            actual.len()
        )));
    }
    let hits = predicted.iter().zip(actual).filter(|(p, a)| p == a).count();
    Ok(100.0 * hits as f64 / predicted.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeedbackRecord {
    pub user_id: String,
    /// One rating per recommended channel: 1 agree, 0 disagree.
    pub ratings: Vec<f64>,
}

impl FeedbackRecord {
    pub fn validate(&self) -> Result<()> {
        if self.ratings.is_empty() {
            return Err(Error::validation(format!(
                "user {}: no ratings",
                self.user_id
            )));
        }
        if let Some(r) = self.ratings.iter().find(|r| !(0.0..=1.0).contains(*r)) {
            return Err(Error::validation(format!(
                "user {}: rating {r} outside [0, 1]",
                self.user_id
            )));
        }
        Ok(())
    }
}

/// Reads `user_id, r1;r2;...` rows. A header row is optional.
pub fn read_feedback_csv<R: Read>(r: R) -> Result<Vec<FeedbackRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(r);
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 1;
        let (Some(id), Some(ratings)) = (rec.get(0), rec.get(1)) else {
            return Err(Error::Parse {
                line,
                message: "expected `user_id, r1;r2;...`".into(),
            });
        };
        if i == 0 && id == "user_id" {
            continue;
        }
        let ratings = ratings
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<f64>().map_err(|_| Error::Parse {
                    line,
                    message: format!("bad rating {s:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let fb = FeedbackRecord {
            user_id: id.to_string(),
            ratings,
        };
        fb.validate()?;
        out.push(fb);
    }
    Ok(out)
}

/// Mean over users of each user's mean rating, as a percentage.
pub fn satisfaction_rate(records: &[FeedbackRecord]) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::validation("no feedback records"));
    }
    let mut means = Vec::with_capacity(records.len());
    for r in records {
        r.validate()?;
        let mut ratings = r.ratings.clone();
        ratings.sort_by(f64::total_cmp);
        means.push(ratings.iter().sum::<f64>() / ratings.len() as f64);
    }
    means.sort_by(f64::total_cmp);
    Ok(100.0 * means.iter().sum::<f64>() / means.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub cosine_accuracy_pct: f64,
    pub nb_accuracy_pct: f64,
    pub mlp_accuracy_pct: f64,
    pub satisfaction_pct: Option<f64>,
    pub matched_pairs: usize,
    pub per_pair: Vec<MatchResult>,
}

impl EvalReport {
    /// Plain-text summary: one accuracy line per engine.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "Cosine Similarity accuracy: {:.2}% ({} matched pairs)",
            self.cosine_accuracy_pct, self.matched_pairs
        );
        let _ = writeln!(s, "Bayes accuracy: {:.2}%", self.nb_accuracy_pct);
        let _ = writeln!(s, "MLP accuracy: {:.2}%", self.mlp_accuracy_pct);
        if let Some(sat) = self.satisfaction_pct {
            let _ = writeln!(s, "Recommendation satisfaction: {sat:.2}%");
        }
        s
    }
}
