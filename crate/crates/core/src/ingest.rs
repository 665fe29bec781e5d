//! Chat export ingestion: parsing, filtering, cleaning and the message store.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MessageKind {
    Text,
    Edit,
    Game,
    Audio,
    Phone,
    Song,
    Subtitle,
    Film,
    Location,
    Photo,
    Other,
}

impl MessageKind {
    /// Unknown kinds map to [`MessageKind::Other`].
    pub fn parse(s: &str) -> Self {
        match s.trim().to_ascii_lowercase().as_str() {
            "text" => Self::Text,
            "edit" => Self::Edit,
            "game" => Self::Game,
            "audio" => Self::Audio,
            "phone" => Self::Phone,
            "song" => Self::Song,
            "subtitle" => Self::Subtitle,
            "film" => Self::Film,
            "location" => Self::Location,
            "photo" => Self::Photo,
            _ => Self::Other,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawMessage {
    pub sender_id: String,
    pub sender_name: String,
    pub timestamp: DateTime<Utc>,
    pub kind: MessageKind,
    pub payload: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanMessage {
    pub sender_id: String,
    pub text: String,
    pub timestamp: DateTime<Utc>,
}

/// One line of the chat export JSONL.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sender_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sender_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
}

impl ExportRecord {
    fn into_raw(self, line: usize) -> Result<RawMessage> {
        let missing = |field: &str| Error::Parse {
            line,
            message: format!("missing {field}"),
        };
        let sender_id = self
            .sender_id
            .filter(|s| !s.is_empty())
            .ok_or_else(|| missing("sender_id"))?;
        let ts = self.timestamp.ok_or_else(|| missing("timestamp"))?;
        let timestamp = DateTime::parse_from_rfc3339(ts.trim())
            .map_err(|e| Error::Parse {
                line,
                message: format!("bad timestamp {ts:?}: {e}"),
            })?
            .with_timezone(&Utc);
        let kind = MessageKind::parse(&self.kind.ok_or_else(|| missing("kind"))?);
        let payload = match kind {
            MessageKind::Text => self.text.ok_or_else(|| missing("text"))?,
            _ => String::new(),
        };
        Ok(RawMessage {
            sender_id,
            sender_name: self.sender_name.unwrap_or_default(),
            timestamp,
            kind,
            payload,
        })
    }
}

/// Parses a line-delimited chat export. Blank lines are skipped.
pub fn parse_chat_export<R: Read>(source: R) -> Result<Vec<RawMessage>> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(source).lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: ExportRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        out.push(rec.into_raw(line_no)?);
    }
    Ok(out)
}

pub fn filter_textual(msg: RawMessage) -> Option<RawMessage> {
    (msg.kind == MessageKind::Text && !msg.payload.trim().is_empty()).then_some(msg)
}

const PERSIAN_PUNCT: &[char] = &['،', '؛', '؟', '«', '»', '٪', '٫', '٬', '۔'];
const UNICODE_PUNCT: &[char] = &[
    '\u{2018}', '\u{2019}', '\u{201C}', '\u{201D}', '\u{2026}', '\u{2013}', '\u{2014}',
];

/// Characters removed by [`clean_text`].
pub fn is_banned(c: char) -> bool {
    c.is_ascii_punctuation()
        || c.is_ascii_alphanumeric()
        || ('\u{06F0}'..='\u{06F9}').contains(&c)
        || ('\u{0660}'..='\u{0669}').contains(&c)
        || PERSIAN_PUNCT.contains(&c)
        || UNICODE_PUNCT.contains(&c)
}

/// Canonical composition plus Arabic yeh/kaf folded to their Persian forms.
pub fn normalize(raw: &str) -> String {
    raw.nfc()
        .map(|c| match c {
            'ي' => 'ی',
            'ك' => 'ک',
            c => c,
        })
        .collect()
}

pub fn clean_text(raw: &str) -> String {
    let stripped: String = normalize(raw).chars().filter(|c| !is_banned(*c)).collect();
    // removal can leave a base and a combining mark adjacent
    let recomposed: String = stripped.nfc().collect();
    recomposed.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Append-only message store persisted as JSONL plus a sender-count index.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MessageStore {
    records: Vec<CleanMessage>,
    index: BTreeMap<String, usize>,
}

impl MessageStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, msg: CleanMessage) {
        *self.index.entry(msg.sender_id.clone()).or_insert(0) += 1;
        self.records.push(msg);
    }

    pub fn records(&self) -> &[CleanMessage] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn counts(&self) -> &BTreeMap<String, usize> {
        &self.index
    }

    pub fn count_for(&self, sender_id: &str) -> usize {
        self.index.get(sender_id).copied().unwrap_or(0)
    }

    pub fn messages_of<'a>(
        &'a self,
        sender_id: &'a str,
    ) -> impl Iterator<Item = &'a CleanMessage> + 'a {
        self.records
            .iter()
            .filter(move |m| m.sender_id == sender_id)
    }

    /// Sidecar index path for a store file: `store.jsonl` -> `store.index.json`.
    pub fn index_path(path: &Path) -> PathBuf {
        path.with_extension("index.json")
    }

    /// Loads a store; a missing file yields an empty store.
    pub fn load(path: &Path) -> Result<Self> {
        let mut store = MessageStore::new();
        if !path.exists() {
            return Ok(store);
        }
        let reader = BufReader::new(File::open(path)?);
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let msg: CleanMessage = serde_json::from_str(&line).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            store.push(msg);
        }
        Ok(store)
    }

    /// Writes the whole store and its index, replacing any existing files.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        for m in &self.records {
            serde_json::to_writer(&mut w, m)?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
        self.save_index(path)
    }

    /// Appends `new` records to an on-disk store and rewrites the index.
    pub fn append_to(&mut self, path: &Path, new: &[CleanMessage]) -> Result<()> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        let mut w = BufWriter::new(file);
        for m in new {
            serde_json::to_writer(&mut w, m)?;
            w.write_all(b"\n")?;
            self.push(m.clone());
        }
        w.flush()?;
        self.save_index(path)
    }

    fn save_index(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_vec_pretty(&self.index)?;
        fs::write(Self::index_path(path), json)?;
        Ok(())
    }
}

/// Parses, filters and cleans `source`, appending accepted messages to `store`.
/// Returns the number of messages appended. Re-ingesting duplicates records.
pub fn ingest_corpus<R: Read>(source: R, store: &mut MessageStore) -> Result<usize> {
    let accepted = clean_records(parse_chat_export(source)?);
    let n = accepted.len();
    for m in accepted {
        store.push(m);
    }
    Ok(n)
}

pub fn clean_records(raw: Vec<RawMessage>) -> Vec<CleanMessage> {
    raw.into_iter()
        .filter_map(filter_textual)
        .filter_map(|m| {
            let text = clean_text(&m.payload);
            (!text.is_empty()).then_some(CleanMessage {
                sender_id: m.sender_id,
                text,
                timestamp: m.timestamp,
            })
        })
        .collect()
}

/// Senders with at least `min_messages` messages, most active first.
pub fn active_users(store: &MessageStore, min_messages: usize) -> Vec<String> {
    let mut users: Vec<(&String, usize)> = store
        .counts()
        .iter()
        .filter(|(_, c)| **c >= min_messages)
        .map(|(id, c)| (id, *c))
        .collect();
    users.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    users.into_iter().map(|(id, _)| id.clone()).collect()
}
