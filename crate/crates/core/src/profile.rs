use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::{TermCounts, WeightVector};
use crate::neo::{index_trait, TraitLabel, TraitVector};

/// A user's (or channel's) identity, term counts, TF-IDF vector and trait data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileRecord", into = "ProfileRecord")]
pub struct Profile {
    pub owner_id: String,
    pub title: Option<String>,
    pub counts: TermCounts,
    pub tfidf: WeightVector,
    pub neo: Option<TraitVector>,
    pub index_trait: Option<TraitLabel>,
}

impl Profile {
    pub fn new(counts: TermCounts, tfidf: WeightVector) -> Self {
        Profile {
            owner_id: counts.owner_id.clone(),
            title: None,
            counts,
            tfidf,
            neo: None,
            index_trait: None,
        }
    }

    /// Attaches NEO scores and sets the index trait from them.
    pub fn with_neo(mut self, neo: TraitVector) -> Self {
        self.index_trait = Some(index_trait(&neo));
        self.neo = Some(neo);
        self
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileRecord {
    owner_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    title: Option<String>,
    term_counts: BTreeMap<String, u64>,
    tfidf: BTreeMap<String, f64>,
    neo: Option<TraitVector>,
    index_trait: Option<TraitLabel>,
}

impl TryFrom<ProfileRecord> for Profile {
    type Error = Error;

    fn try_from(r: ProfileRecord) -> Result<Self> {
        if let Some((t, w)) = r.tfidf.iter().find(|(_, w)| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::validation(format!(
                "{}: tfidf({t:?}) = {w} is not a non-negative number",
                r.owner_id
            )));
        }
        if let Some(neo) = &r.neo {
            neo.validate()?;
        }
        Ok(Profile {
            counts: TermCounts::from_counts(&r.owner_id, r.term_counts)?,
            tfidf: WeightVector::new(r.owner_id.clone(), r.tfidf),
            owner_id: r.owner_id,
            title: r.title,
            neo: r.neo,
            index_trait: r.index_trait,
        })
    }
}

impl From<Profile> for ProfileRecord {
    fn from(p: Profile) -> Self {
        ProfileRecord {
            owner_id: p.owner_id,
            title: p.title,
            term_counts: p.counts.counts,
            tfidf: p.tfidf.weights,
            neo: p.neo,
            index_trait: p.index_trait,
        }
    }
}

/// Reads one profile JSON object per line.
pub fn read_profiles(path: &Path) -> Result<Vec<Profile>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}

pub fn write_profiles(path: &Path, profiles: &[Profile]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for p in profiles {
        serde_json::to_writer(&mut w, p)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}
