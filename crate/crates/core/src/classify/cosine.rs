use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::WeightVector;
use crate::neo::{trait_match_count, TraitLabel};
use crate::profile::Profile;

/// Cosine similarity of two sparse weight vectors, clamped to `[0, 1]`.
pub fn cosine(a: &WeightVector, b: &WeightVector) -> Result<f64> {
    let sq = |v: &WeightVector| v.weights.values().map(|w| w * w).sum::<f64>();
    let (na, nb) = (sq(a), sq(b));
    if na == 0.0 || nb == 0.0 {
        let who = if na == 0.0 { &a.owner_id } else { &b.owner_id };
        return Err(Error::domain(format!("zero-norm vector for {who:?}")));
    }
    let (small, large) = if a.weights.len() <= b.weights.len() {
        (a, b)
    } else {
        (b, a)
    };
    let dot: f64 = small
        .weights
        .iter()
        .filter_map(|(t, w)| large.weights.get(t).map(|v| w * v))
        .fold(0.0, |acc, x| acc + x); // an empty f64 sum is -0.0
                                      // sqrt of the product keeps cosine(a, a) exactly 1
    Ok((dot / (na * nb).sqrt()).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchResult {
    pub test_id: String,
    pub best_train_id: String,
    pub similarity: f64,
    /// Present only when both sides carry NEO scores.
    pub s_score: Option<u8>,
    /// Index trait inherited from the matched training user.
    pub predicted: Option<TraitLabel>,
}

/// Most similar training user; ties go to the smaller owner id.
/// Zero-norm training vectors are never candidates.
pub fn nearest_train_user(test: &Profile, train: &[Profile], tol: f64) -> Result<MatchResult> {
    if train.is_empty() {
        return Err(Error::validation("no training users to match against"));
    }
    if test.tfidf.is_zero() {
        return Err(Error::domain(format!(
            "no similarity for {:?}: empty weight vector",
            test.owner_id
        )));
    }
    let mut best: Option<(&Profile, f64)> = None;
    for cand in train.iter().filter(|p| !p.tfidf.is_zero()) {
        let sim = cosine(&test.tfidf, &cand.tfidf)?;
        let better = match best {
            None => true,
            Some((b, s)) => sim > s || (sim == s && cand.owner_id < b.owner_id),
        };
        if better {
            best = Some((cand, sim));
        }
    }
    let (winner, similarity) =
        best.ok_or_else(|| Error::domain("every training user has an empty weight vector"))?;
    let s_score = match (&test.neo, &winner.neo) {
        (Some(a), Some(b)) => Some(trait_match_count(a, b, tol)),
        _ => None,
    };
    Ok(MatchResult {
        test_id: test.owner_id.clone(),
        best_train_id: winner.owner_id.clone(),
        similarity,
        s_score,
        predicted: winner.index_trait,
    })
}
