//! NEO questionnaire scoring.
//!
//! Responses are 60 Likert answers in `[1, 5]`. Each item belongs to one of
//! the five traits (twelve items per trait) and may be reverse-keyed, in which
//! case its effective value is `6 - answer`. A trait score is the sum of its
//! twelve effective values, so every produced score lies in `[12, 60]`.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ITEM_COUNT: usize = 60;
pub const ITEMS_PER_TRAIT: usize = 12;
pub const MIN_ANSWER: u8 = 1;
pub const MAX_ANSWER: u8 = 5;

/// The five NEO traits in canonical order O, C, E, A, N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TraitLabel {
    Openness,
    Conscientiousness,
    Extraversion,
    Agreeableness,
    Neuroticism,
}

impl TraitLabel {
    pub const ALL: [TraitLabel; 5] = [
        TraitLabel::Openness,
        TraitLabel::Conscientiousness,
        TraitLabel::Extraversion,
        TraitLabel::Agreeableness,
        TraitLabel::Neuroticism,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TraitLabel::Openness => "Openness",
            TraitLabel::Conscientiousness => "Conscientiousness",
            TraitLabel::Extraversion => "Extraversion",
            TraitLabel::Agreeableness => "Agreeableness",
            TraitLabel::Neuroticism => "Neuroticism",
        }
    }
}

impl fmt::Display for TraitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TraitLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        TraitLabel::ALL
            .into_iter()
            .find(|l| {
                l.as_str().eq_ignore_ascii_case(t) || (t.len() == 1 && l.as_str().starts_with(t))
            })
            .ok_or_else(|| Error::validation(format!("unknown trait label {s:?}")))
    }
}

/// Five trait scores indexed by [`TraitLabel`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TraitVector(pub [f64; 5]);

impl TraitVector {
    pub fn get(&self, t: TraitLabel) -> f64 {
        self.0[t.index()]
    }

    pub fn validate(&self) -> Result<()> {
        if self.0.iter().all(|s| s.is_finite() && *s >= 0.0) {
            Ok(())
        } else {
            Err(Error::validation(format!(
                "trait scores must be finite and non-negative, got {:?}",
                self.0
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeoResponse {
    pub respondent_id: String,
    pub answers: Vec<u8>,
}

impl NeoResponse {
    pub fn validate(&self) -> Result<()> {
        if self.answers.len() != ITEM_COUNT {
            return Err(Error::validation(format!(
                "respondent {}: expected {ITEM_COUNT} answers, got {}",
                self.respondent_id,
                self.answers.len()
            )));
        }
        if let Some((i, a)) = self
            .answers
            .iter()
            .enumerate()
            .find(|(_, a)| !(MIN_ANSWER..=MAX_ANSWER).contains(*a))
        {
            return Err(Error::validation(format!(
                "respondent {}: answer a{} = {a} outside [{MIN_ANSWER}, {MAX_ANSWER}]",
                self.respondent_id,
                i + 1
            )));
        }
        Ok(())
    }
}

/// Item keying: which trait each item measures and whether it is reversed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NeoKey {
    pub item_trait: Vec<TraitLabel>,
    pub reversed: Vec<bool>,
}

impl NeoKey {
    /// Items cycle through O, C, E, A, N; no item is reversed.
    pub fn cyclic() -> Self {
        NeoKey {
            item_trait: (0..ITEM_COUNT).map(|i| TraitLabel::ALL[i % 5]).collect(),
            reversed: vec![false; ITEM_COUNT],
        }
    }

    /// Cyclic trait assignment with every third item of each trait reversed.
    pub fn cyclic_with_reversals() -> Self {
        let mut key = Self::cyclic();
        for (i, r) in key.reversed.iter_mut().enumerate() {
            *r = (i / 5) % 3 == 2;
        }
        key
    }

    pub fn validate(&self) -> Result<()> {
        if self.item_trait.len() != ITEM_COUNT || self.reversed.len() != ITEM_COUNT {
            return Err(Error::validation(format!(
                "neo key must list {ITEM_COUNT} items (got {} traits, {} reversal flags)",
                self.item_trait.len(),
                self.reversed.len()
            )));
        }
        for t in TraitLabel::ALL {
            let n = self.item_trait.iter().filter(|x| **x == t).count();
            if n != ITEMS_PER_TRAIT {
                return Err(Error::validation(format!(
                    "neo key assigns {n} items to {t}, expected {ITEMS_PER_TRAIT}"
                )));
            }
        }
        Ok(())
    }

    pub fn from_json_reader<R: Read>(r: R) -> Result<Self> {
        let key: NeoKey = serde_json::from_reader(r)?;
        key.validate()?;
        Ok(key)
    }

    /// Effective value of `answer` at item `i`.
    pub fn effective(&self, i: usize, answer: u8) -> u8 {
        if self.reversed[i] {
            6 - answer
        } else {
            answer
        }
    }
}

pub fn score_neo(resp: &NeoResponse, key: &NeoKey) -> Result<TraitVector> {
    key.validate()?;
    resp.validate()?;
    let mut scores = [0.0; 5];
    for (i, &a) in resp.answers.iter().enumerate() {
        scores[key.item_trait[i].index()] += f64::from(key.effective(i, a));
    }
    Ok(TraitVector(scores))
}

/// Highest-scoring trait; ties go to the lowest canonical index.
pub fn index_trait(tv: &TraitVector) -> TraitLabel {
    let mut best = 0;
    for i in 1..5 {
        if tv.0[i] > tv.0[best] {
            best = i;
        }
    }
    TraitLabel::ALL[best]
}

/// Number of traits whose scores differ by at most `tol`.
pub fn trait_match_count(a: &TraitVector, b: &TraitVector, tol: f64) -> u8 {
    a.0.iter()
        .zip(b.0.iter())
        .filter(|(x, y)| (*x - *y).abs() <= tol)
        .count() as u8
}

/// Reads `respondent_id, a1..a60` rows. A header row is required.
pub fn read_responses_csv<R: Read>(r: R) -> Result<Vec<NeoResponse>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(r);
    let mut out = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = row + 2;
        let id = rec.get(0).filter(|s| !s.is_empty()).ok_or(Error::Parse {
            line,
            message: "missing respondent_id".into(),
        })?;
        let answers = rec
            .iter()
            .skip(1)
            .map(|f| {
                f.parse::<u8>().map_err(|_| Error::Parse {
                    line,
                    message: format!("answer {f:?} is not an integer"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let resp = NeoResponse {
            respondent_id: id.to_string(),
            answers,
        };
        resp.validate()?;
        out.push(resp);
    }
    Ok(out)
}

pub fn write_responses_csv<W: Write>(w: W, responses: &[NeoResponse]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let mut header = vec!["respondent_id".to_string()];
    header.extend((1..=ITEM_COUNT).map(|i| format!("a{i}")));
    wtr.write_record(&header)?;
    for r in responses {
        let mut row = vec![r.respondent_id.clone()];
        row.extend(r.answers.iter().map(|a| a.to_string()));
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}
