//! Channel profiling: each channel's posts are treated as one person's messages.

use std::io::{BufRead, BufReader, Read};

use chrono::{DateTime, Utc};
use scraper::{ElementRef, Html, Node, Selector};
use serde::{Deserialize, Serialize};

use crate::classify::{
    nearest_train_user, predict_mlp, predict_nb, Engine, FeatureSpace, MLPModel, NBModel,
};
use crate::error::{Error, Result};
use crate::ingest::clean_text;
use crate::lexicon::{compute_tfidf, GlobalLexicon, TermCounts, Tokenizer, WeightVector};
use crate::neo::TraitLabel;
use crate::profile::Profile;

/// `(channel_id, title)` pairs in first-seen order.
pub type ChannelTitles = Vec<(String, String)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelPost {
    pub channel_id: String,
    pub text: String,
    pub timestamp: Option<DateTime<Utc>>,
}

/// One line of the channel JSONL input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelRecord {
    pub channel_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<DateTime<Utc>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelProfile {
    pub channel_id: String,
    pub title: String,
    pub term_counts: TermCounts,
    pub tfidf: WeightVector,
    pub trait_label: Option<TraitLabel>,
}

impl ChannelProfile {
    /// Persisted form, sharing the user profile schema.
    pub fn to_profile(&self) -> Profile {
        Profile {
            owner_id: self.channel_id.clone(),
            title: Some(self.title.clone()),
            counts: self.term_counts.clone(),
            tfidf: self.tfidf.clone(),
            neo: None,
            index_trait: self.trait_label,
        }
    }

    pub fn from_profile(p: Profile) -> Self {
        ChannelProfile {
            title: p.title.unwrap_or_else(|| p.owner_id.clone()),
            channel_id: p.owner_id,
            term_counts: p.counts,
            tfidf: p.tfidf,
            trait_label: p.index_trait,
        }
    }
}

fn has_class(el: &ElementRef<'_>, class: &str) -> bool {
    el.value().classes().any(|c| c == class)
}

fn flatten_text(el: ElementRef<'_>, out: &mut String) {
    for child in el.children() {
        match child.value() {
            Node::Text(t) => out.push_str(t),
            Node::Element(e) if e.name() == "br" => out.push(' '),
            Node::Element(_) => {
                if let Some(child_el) = ElementRef::wrap(child) {
                    flatten_text(child_el, out);
                }
            }
            _ => {}
        }
    }
}

/// Extracts posts from a saved channel export page.
///
/// Message blocks are elements with class `message`; the post text is the
/// character data under the block's first descendant with class `text`,
/// with inline markup flattened and whitespace collapsed. Blocks without a
/// text element are skipped. Nested message blocks are not re-emitted.
pub fn parse_channel_html_export<R: Read>(
    mut source: R,
    channel_id: &str,
) -> Result<Vec<ChannelPost>> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    let doc = String::from_utf8(bytes).map_err(|e| Error::Html(format!("not UTF-8: {e}")))?;
    if !doc.contains('<') {
        return Err(Error::Html("document contains no markup".into()));
    }
    let html = Html::parse_document(&doc);
    let messages = Selector::parse(".message").expect("static selector");
    let texts = Selector::parse(".text").expect("static selector");
    let mut posts = Vec::new();
    for block in html.select(&messages) {
        let nested = block
            .ancestors()
            .filter_map(ElementRef::wrap)
            .any(|a| has_class(&a, "message"));
        if nested {
            continue;
        }
        let Some(text_el) = block.select(&texts).next() else {
            continue;
        };
        let mut raw = String::new();
        flatten_text(text_el, &mut raw);
        let text = raw.split_whitespace().collect::<Vec<_>>().join(" ");
        if text.is_empty() {
            continue;
        }
        let timestamp = block
            .select(&Selector::parse(".date[title]").expect("static selector"))
            .next()
            .and_then(|d| d.value().attr("title"))
            .and_then(parse_export_date);
        posts.push(ChannelPost {
            channel_id: channel_id.to_string(),
            text,
            timestamp,
        });
    }
    Ok(posts)
}

// Telegram desktop writes "dd.mm.yyyy hh:mm:ss", optionally with a UTC offset.
fn parse_export_date(s: &str) -> Option<DateTime<Utc>> {
    let head = s.split(" UTC").next()?.trim();
    chrono::NaiveDateTime::parse_from_str(head, "%d.%m.%Y %H:%M:%S")
        .ok()
        .map(|n| n.and_utc())
}

/// Reads channel JSONL; returns posts plus `(channel_id, title)` in first-seen order.
pub fn read_channel_jsonl<R: Read>(source: R) -> Result<(Vec<ChannelPost>, ChannelTitles)> {
    let mut posts = Vec::new();
    let mut titles: Vec<(String, String)> = Vec::new();
    for (i, line) in BufReader::new(source).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: ChannelRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        if rec.channel_id.is_empty() {
            return Err(Error::Parse {
                line: i + 1,
                message: "missing channel_id".into(),
            });
        }
        if !titles.iter().any(|(id, _)| *id == rec.channel_id) {
            titles.push((
                rec.channel_id.clone(),
                rec.title.clone().unwrap_or_else(|| rec.channel_id.clone()),
            ));
        }
        posts.push(ChannelPost {
            channel_id: rec.channel_id,
            text: rec.text,
            timestamp: rec.timestamp,
        });
    }
    Ok((posts, titles))
}

/// Runs the user pipeline over a channel's posts against the user lexicon.
pub fn build_channel_profile(
    channel_id: &str,
    title: &str,
    posts: &[ChannelPost],
    lex: &GlobalLexicon,
    tok: &Tokenizer,
) -> Result<ChannelProfile> {
    if posts.is_empty() {
        return Err(Error::validation(format!(
            "channel {channel_id:?} has no posts"
        )));
    }
    let tokens: Vec<String> = posts
        .iter()
        .map(|p| clean_text(&p.text))
        .filter(|t| !t.is_empty())
        .flat_map(|t| tok.tokenize(&t))
        .collect();
    if tokens.is_empty() {
        return Err(Error::validation(format!(
            "channel {channel_id:?}: every post cleans to nothing"
        )));
    }
    let term_counts = TermCounts::from_tokens(channel_id, &tokens);
    let tfidf = compute_tfidf(&term_counts, lex);
    if tfidf.is_zero() {
        return Err(Error::validation(format!(
            "channel {channel_id:?} shares no weighted vocabulary with the user lexicon"
        )));
    }
    Ok(ChannelProfile {
        channel_id: channel_id.to_string(),
        title: title.to_string(),
        term_counts,
        tfidf,
        trait_label: None,
    })
}

/// Artifacts the three engines need for prediction.
#[derive(Debug, Clone, Default)]
pub struct TrainedEngines {
    /// Labeled training users for the cosine matcher.
    pub train_profiles: Vec<Profile>,
    pub space: Option<FeatureSpace>,
    pub nb: Option<NBModel>,
    pub mlp: Option<MLPModel>,
}

impl TrainedEngines {
    /// Predicts the index trait of any weight vector with `engine`.
    pub fn predict(
        &self,
        owner_id: &str,
        tfidf: &WeightVector,
        engine: Engine,
    ) -> Result<TraitLabel> {
        if tfidf.is_zero() {
            return Err(Error::domain(format!(
                "{owner_id:?} has an empty weight vector"
            )));
        }
        let space = || {
            self.space
                .as_ref()
                .ok_or_else(|| Error::validation("feature space not loaded"))
        };
        match engine {
            Engine::Cosine => {
                let probe = Profile {
                    owner_id: owner_id.to_string(),
                    title: None,
                    counts: TermCounts::from_tokens(owner_id, &[] as &[&str]),
                    tfidf: tfidf.clone(),
                    neo: None,
                    index_trait: None,
                };
                nearest_train_user(&probe, &self.train_profiles, 0.0)?
                    .predicted
                    .ok_or_else(|| Error::validation("matched training user has no trait label"))
            }
            Engine::Nb => {
                let m = self
                    .nb
                    .as_ref()
                    .ok_or_else(|| Error::validation("naive Bayes model is not trained"))?;
                Ok(predict_nb(m, &space()?.row(tfidf))?.0)
            }
            Engine::Mlp => {
                let m = self
                    .mlp
                    .as_ref()
                    .ok_or_else(|| Error::validation("MLP model is not trained"))?;
                Ok(predict_mlp(m, &space()?.row(tfidf))?.0)
            }
        }
    }
}

pub fn classify_channel(
    cp: &ChannelProfile,
    engine: Engine,
    trained: &TrainedEngines,
) -> Result<TraitLabel> {
    trained.predict(&cp.channel_id, &cp.tfidf, engine)
}
