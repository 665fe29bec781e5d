//! Tokenization, term counts and TF-IDF weighting.
//!
//! A document is one owner's concatenated messages. Term frequency is the
//! term count over the owner's token total; inverse document frequency is
//! `ln(n_docs / df)` with no smoothing, so every lexicon term has `df >= 1`.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::MessageStore;
use crate::neo::TraitLabel;

const ZWNJ: char = '\u{200C}';

/// Whitespace tokenizer with an optional stopword list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tokenizer {
    /// Treat the zero-width non-joiner as a token separator.
    pub split_zwnj: bool,
    pub stopwords: BTreeSet<String>,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Tokenizer {
            split_zwnj: true,
            stopwords: BTreeSet::new(),
        }
    }
}

impl Tokenizer {
    pub fn with_stopwords<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Tokenizer {
            stopwords: words.into_iter().map(Into::into).collect(),
            ..Default::default()
        }
    }

    /// One stopword per line; blank lines and `#` comments are ignored.
    pub fn read_stopwords<R: Read>(mut r: R) -> Result<BTreeSet<String>> {
        let mut s = String::new();
        r.read_to_string(&mut s)?;
        Ok(s.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(crate::ingest::normalize)
            .collect())
    }

    pub fn tokenize(&self, text: &str) -> Vec<String> {
        text.split(|c: char| c.is_whitespace() || (self.split_zwnj && c == ZWNJ))
            .filter(|t| !t.is_empty() && !self.stopwords.contains(*t))
            .map(str::to_string)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UserDocument {
    pub owner_id: String,
    pub tokens: Vec<String>,
}

impl UserDocument {
    /// Concatenates the owner's messages in store order.
    pub fn from_store(store: &MessageStore, owner_id: &str, tok: &Tokenizer) -> Result<Self> {
        let mut seen = false;
        let mut tokens = Vec::new();
        for m in store.messages_of(owner_id) {
            seen = true;
            tokens.extend(tok.tokenize(&m.text));
        }
        if !seen {
            return Err(Error::NotFound(format!(
                "no stored messages for owner {owner_id:?}"
            )));
        }
        Ok(UserDocument {
            owner_id: owner_id.to_string(),
            tokens,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermCounts {
    pub owner_id: String,
    pub counts: BTreeMap<String, u64>,
    pub total: u64,
}

impl TermCounts {
    pub fn from_tokens<S: AsRef<str>>(owner_id: &str, tokens: &[S]) -> Self {
        let mut counts = BTreeMap::new();
        for t in tokens {
            *counts.entry(t.as_ref().to_string()).or_insert(0) += 1;
        }
        TermCounts {
            owner_id: owner_id.to_string(),
            counts,
            total: tokens.len() as u64,
        }
    }

    /// Rebuilds from a count map, recomputing the total.
    pub fn from_counts(owner_id: &str, counts: BTreeMap<String, u64>) -> Result<Self> {
        if counts.values().any(|c| *c == 0) {
            return Err(Error::validation(format!(
                "{owner_id}: zero term count stored"
            )));
        }
        let total = counts.values().sum();
        Ok(TermCounts {
            owner_id: owner_id.to_string(),
            counts,
            total,
        })
    }
}

pub fn build_term_counts(
    store: &MessageStore,
    owner_id: &str,
    tok: &Tokenizer,
) -> Result<TermCounts> {
    let doc = UserDocument::from_store(store, owner_id, tok)?;
    if doc.tokens.is_empty() {
        return Err(Error::validation(format!(
            "owner {owner_id:?} has no tokens after stopword removal"
        )));
    }
    Ok(TermCounts::from_tokens(owner_id, &doc.tokens))
}

pub fn compute_tf(tc: &TermCounts) -> Result<BTreeMap<String, f64>> {
    if tc.total == 0 {
        return Err(Error::validation(format!(
            "{}: term total is zero",
            tc.owner_id
        )));
    }
    let total = tc.total as f64;
    Ok(tc
        .counts
        .iter()
        .map(|(t, n)| (t.clone(), *n as f64 / total))
        .collect())
}

/// Corpus-wide document frequencies and the derived IDF table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LexiconFile", into = "LexiconFile")]
pub struct GlobalLexicon {
    n_docs: usize,
    df: BTreeMap<String, usize>,
    idf: BTreeMap<String, f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LexiconFile {
    n_docs: usize,
    df: BTreeMap<String, usize>,
}

impl TryFrom<LexiconFile> for GlobalLexicon {
    type Error = Error;

    fn try_from(f: LexiconFile) -> Result<Self> {
        GlobalLexicon::from_df(f.n_docs, f.df)
    }
}

impl From<GlobalLexicon> for LexiconFile {
    fn from(l: GlobalLexicon) -> Self {
        LexiconFile {
            n_docs: l.n_docs,
            df: l.df,
        }
    }
}

pub(crate) fn idf_value(n_docs: usize, df: usize) -> f64 {
    (n_docs as f64 / df as f64).ln()
}

impl GlobalLexicon {
    pub fn from_df(n_docs: usize, df: BTreeMap<String, usize>) -> Result<Self> {
        if n_docs == 0 {
            return Err(Error::validation("lexicon needs at least one document"));
        }
        if let Some((t, d)) = df.iter().find(|(_, d)| **d == 0 || **d > n_docs) {
            return Err(Error::validation(format!(
                "df({t:?}) = {d} outside [1, {n_docs}]"
            )));
        }
        let idf = df
            .iter()
            .map(|(t, d)| (t.clone(), idf_value(n_docs, *d)))
            .collect();
        Ok(GlobalLexicon { n_docs, df, idf })
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn df(&self) -> &BTreeMap<String, usize> {
        &self.df
    }

    pub fn idf(&self, term: &str) -> Option<f64> {
        self.idf.get(term).copied()
    }

    pub fn idf_table(&self) -> &BTreeMap<String, f64> {
        &self.idf
    }

    pub fn len(&self) -> usize {
        self.df.len()
    }

    pub fn is_empty(&self) -> bool {
        self.df.is_empty()
    }
}

pub fn build_global_lexicon(docs: &[TermCounts]) -> Result<GlobalLexicon> {
    if docs.is_empty() {
        return Err(Error::validation(
            "cannot build a lexicon from zero documents",
        ));
    }
    let mut df = BTreeMap::new();
    for d in docs {
        for t in d.counts.keys() {
            *df.entry(t.clone()).or_insert(0) += 1;
        }
    }
    GlobalLexicon::from_df(docs.len(), df)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeightVector {
    pub owner_id: String,
    pub weights: BTreeMap<String, f64>,
}

impl WeightVector {
    pub fn new(owner_id: impl Into<String>, weights: BTreeMap<String, f64>) -> Self {
        WeightVector {
            owner_id: owner_id.into(),
            weights,
        }
    }

    pub fn norm(&self) -> f64 {
        self.weights.values().map(|w| w * w).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.values().all(|w| *w == 0.0)
    }

    pub fn scaled(&self, c: f64) -> Self {
        WeightVector {
            owner_id: self.owner_id.clone(),
            weights: self
                .weights
                .iter()
                .map(|(t, w)| (t.clone(), w * c))
                .collect(),
        }
    }
}

/// `tf(t) * idf(t)` for terms present in both; zero weights are omitted.
pub fn compute_tfidf(tc: &TermCounts, lex: &GlobalLexicon) -> WeightVector {
    let mut weights = BTreeMap::new();
    if tc.total > 0 {
        let total = tc.total as f64;
        for (t, n) in &tc.counts {
            if let Some(idf) = lex.idf(t) {
                let w = (*n as f64 / total) * idf;
                if w > 0.0 {
                    weights.insert(t.clone(), w);
                }
            }
        }
    }
    WeightVector::new(tc.owner_id.clone(), weights)
}

/// The `k` heaviest terms, ties broken by term order.
pub fn top_terms(wv: &WeightVector, k: usize) -> Vec<(String, f64)> {
    let mut terms: Vec<(String, f64)> = wv.weights.iter().map(|(t, w)| (t.clone(), *w)).collect();
    terms.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    terms.truncate(k);
    terms
}

/// Per-trait term weights aggregated from labeled users.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraitLexicon {
    pub per_trait: BTreeMap<TraitLabel, BTreeMap<String, f64>>,
}

impl TraitLexicon {
    pub fn terms(&self, t: TraitLabel) -> &BTreeMap<String, f64> {
        &self.per_trait[&t]
    }

    /// The trait's term map as a pseudo-user vector.
    pub fn as_weight_vector(&self, t: TraitLabel) -> WeightVector {
        WeightVector::new(format!("trait:{t}"), self.terms(t).clone())
    }
}

/// Termwise sum of the weight vectors of every user labeled with each trait.
pub fn build_trait_lexicon<'a, I>(labeled: I) -> TraitLexicon
where
    I: IntoIterator<Item = (TraitLabel, &'a WeightVector)>,
{
    let mut parts: BTreeMap<TraitLabel, BTreeMap<&'a str, Vec<f64>>> = BTreeMap::new();
    for (label, wv) in labeled {
        let slot = parts.entry(label).or_default();
        for (t, w) in &wv.weights {
            slot.entry(t.as_str()).or_default().push(*w);
        }
    }
    let per_trait = TraitLabel::ALL
        .into_iter()
        .map(|label| {
            let terms = parts
                .remove(&label)
                .unwrap_or_default()
                .into_iter()
                .map(|(t, mut ws)| {
                    // summation order fixed so that input order does not matter
                    ws.sort_by(f64::total_cmp);
                    (t.to_string(), ws.iter().sum())
                })
                .collect();
            (label, terms)
        })
        .collect();
    TraitLexicon { per_trait }
}
