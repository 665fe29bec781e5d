//! Channel ranking by user/channel cosine similarity.

use serde::{Deserialize, Serialize};

use crate::channels::ChannelProfile;
use crate::classify::cosine;
use crate::error::{Error, Result};
use crate::profile::Profile;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredChannel {
    pub channel_id: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Recommendation {
    pub user_id: String,
    pub ranked: Vec<ScoredChannel>,
    pub k: usize,
}

/// Output line: `{user_id, recommendations: [{channel_id, score}], skipped}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecommendationLine {
    pub user_id: String,
    pub recommendations: Vec<ScoredChannel>,
    pub skipped: bool,
}

fn score(user: &Profile, ch: &ChannelProfile) -> Result<f64> {
    if ch.tfidf.is_zero() {
        Ok(0.0)
    } else {
        cosine(&user.tfidf, &ch.tfidf)
    }
}

/// Top `k` channels by cosine score, ties by channel id. With `trait_gate`
/// and traits on both sides, only channels sharing the user's index trait are
/// ranked, unless none do.
pub fn rank_channels(
    user: &Profile,
    channels: &[ChannelProfile],
    k: usize,
    trait_gate: bool,
) -> Result<Recommendation> {
    if k == 0 {
        return Err(Error::validation("k must be positive"));
    }
    if channels.is_empty() {
        return Err(Error::validation("no channels to rank"));
    }
    if user.tfidf.is_zero() {
        return Err(Error::domain(format!(
            "no recommendations for {:?}: empty weight vector",
            user.owner_id
        )));
    }
    let mut pool: Vec<&ChannelProfile> = channels.iter().collect();
    if trait_gate {
        if let Some(t) = user.index_trait {
            let gated: Vec<&ChannelProfile> = pool
                .iter()
                .copied()
                .filter(|c| c.trait_label == Some(t))
                .collect();
            if !gated.is_empty() {
                pool = gated;
            }
        }
    }
    let mut ranked = pool
        .into_iter()
        .map(|c| {
            Ok(ScoredChannel {
                channel_id: c.channel_id.clone(),
                score: score(user, c)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ranked.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.channel_id.cmp(&b.channel_id))
    });
    ranked.dedup_by(|a, b| a.channel_id == b.channel_id);
    ranked.truncate(k);
    Ok(Recommendation {
        user_id: user.owner_id.clone(),
        ranked,
        k,
    })
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BatchRecommendations {
    pub recommendations: Vec<Recommendation>,
    /// Users with empty weight vectors.
    pub skipped: Vec<String>,
}

impl BatchRecommendations {
    /// One output line per user, ordered by user id.
    pub fn lines(&self) -> Vec<RecommendationLine> {
        let mut lines: Vec<RecommendationLine> = self
            .recommendations
            .iter()
            .map(|r| RecommendationLine {
                user_id: r.user_id.clone(),
                recommendations: r.ranked.clone(),
                skipped: false,
            })
            .chain(self.skipped.iter().map(|id| RecommendationLine {
                user_id: id.clone(),
                recommendations: vec![],
                skipped: true,
            }))
            .collect();
        lines.sort_by(|a, b| a.user_id.cmp(&b.user_id));
        lines
    }
}

pub fn batch_recommend(
    users: &[Profile],
    channels: &[ChannelProfile],
    k: usize,
    trait_gate: bool,
) -> Result<BatchRecommendations> {
    if channels.is_empty() {
        return Err(Error::validation("no channels to rank"));
    }
    let mut sorted: Vec<&Profile> = users.iter().collect();
    sorted.sort_by(|a, b| a.owner_id.cmp(&b.owner_id));
    let mut out = BatchRecommendations::default();
    for u in sorted {
        if u.tfidf.is_zero() {
            out.skipped.push(u.owner_id.clone());
        } else {
            out.recommendations
                .push(rank_channels(u, channels, k, trait_gate)?);
        }
    }
    Ok(out)
}
