//! Seeded synthetic corpora with planted per-trait vocabularies.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Duration, TimeZone, Utc};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channels::{ChannelPost, ChannelRecord};
use crate::error::{Error, Result};
use crate::ingest::{clean_records, ExportRecord, MessageKind, MessageStore, RawMessage};
use crate::neo::{NeoKey, NeoResponse, TraitLabel, ITEM_COUNT};

const LETTERS: &[char] = &[
    'ا', 'ب', 'پ', 'ت', 'ث', 'ج', 'چ', 'ح', 'خ', 'د', 'ذ', 'ر', 'ز', 'ژ', 'س', 'ش', 'ص', 'ض', 'ط',
    'ظ', 'ع', 'غ', 'ف', 'ق', 'ک', 'گ', 'ل', 'م', 'ن', 'و', 'ه', 'ی',
];
// noise the cleaner must strip
const DECORATIONS: &[&str] = &["،", "!", "؟", "...", "»"];
const JUNK_TOKENS: &[&str] = &["ok", "۱۲", "2021", "(:", "#tag"];

const PLANTED_SCORE: i32 = 50;
const BASE_SCORE: i32 = 36;
const PLANTED_JITTER: i32 = 3;
const BASE_JITTER: i32 = 4;
const POSTS_PER_CHANNEL: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub seed: u64,
    pub n_users_per_trait: usize,
    pub vocab_per_trait: usize,
    pub shared_vocab: usize,
    pub msgs_per_user: usize,
    pub noise_rate: f64,
}

impl SyntheticSpec {
    /// The canonical fixture: seed 7, 4 users and 30 words per trait, 10
    /// shared words, 200 messages per user, noise 0.2.
    pub fn canonical() -> Self {
        SyntheticSpec {
            seed: 7,
            n_users_per_trait: 4,
            vocab_per_trait: 30,
            shared_vocab: 10,
            msgs_per_user: 200,
            noise_rate: 0.2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_users_per_trait == 0 || self.vocab_per_trait == 0 || self.msgs_per_user == 0 {
            return Err(Error::validation(
                "synthetic users, vocabulary and messages must be positive",
            ));
        }
        if !(0.0..1.0).contains(&self.noise_rate) {
            return Err(Error::validation(format!(
                "noise_rate {} outside [0, 1)",
                self.noise_rate
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCorpus {
    pub spec: SyntheticSpec,
    /// Chat export records in emission order (includes non-text records).
    pub export: Vec<ExportRecord>,
    pub neo_key: NeoKey,
    pub neo_responses: Vec<NeoResponse>,
    /// Channel posts, one channel per trait.
    pub channels: Vec<ChannelRecord>,
    pub channel_traits: BTreeMap<String, TraitLabel>,
    pub truth: BTreeMap<String, TraitLabel>,
    pub vocab: BTreeMap<TraitLabel, Vec<String>>,
    pub shared: Vec<String>,
}

impl SyntheticCorpus {
    pub fn export_jsonl(&self) -> String {
        jsonl(&self.export)
    }

    pub fn channel_jsonl(&self) -> String {
        jsonl(&self.channels)
    }

    pub fn channel_posts(&self) -> Vec<ChannelPost> {
        self.channels
            .iter()
            .map(|c| ChannelPost {
                channel_id: c.channel_id.clone(),
                text: c.text.clone(),
                timestamp: c.timestamp,
            })
            .collect()
    }

    /// Ingests the export into a fresh store.
    pub fn store(&self) -> Result<MessageStore> {
        let mut store = MessageStore::new();
        crate::ingest::ingest_corpus(self.export_jsonl().as_bytes(), &mut store)?;
        Ok(store)
    }
}

fn jsonl<T: Serialize>(items: &[T]) -> String {
    let mut s = String::new();
    for it in items {
        s.push_str(&serde_json::to_string(it).expect("plain records serialize"));
        s.push('\n');
    }
    s
}

fn gen_word(rng: &mut ChaCha8Rng, taken: &mut BTreeSet<String>) -> String {
    loop {
        let len = rng.gen_range(3..=6);
        let w: String = (0..len)
            .map(|_| *LETTERS.choose(rng).expect("non-empty"))
            .collect();
        // cleaning must leave the word intact
        let raw = RawMessage {
            sender_id: "x".into(),
            sender_name: String::new(),
            timestamp: Utc.timestamp_opt(0, 0).unwrap(),
            kind: MessageKind::Text,
            payload: w.clone(),
        };
        let survives = clean_records(vec![raw])
            .first()
            .is_some_and(|m| m.text == w);
        if survives && taken.insert(w.clone()) {
            return w;
        }
    }
}

fn pick_word<'a>(
    rng: &mut ChaCha8Rng,
    own: &'a [String],
    shared: &'a [String],
    noise: f64,
) -> &'a str {
    if !shared.is_empty() && rng.gen::<f64>() < noise {
        shared.choose(rng).expect("non-empty")
    } else {
        own.choose(rng).expect("non-empty")
    }
}

fn sentence(
    rng: &mut ChaCha8Rng,
    own: &[String],
    shared: &[String],
    noise: f64,
    len: (usize, usize),
) -> String {
    let n = rng.gen_range(len.0..=len.1);
    let mut words: Vec<String> = Vec::with_capacity(n + 1);
    for _ in 0..n {
        let mut w = pick_word(rng, own, shared, noise).to_string();
        if rng.gen::<f64>() < 0.08 {
            w.push_str(DECORATIONS.choose(rng).expect("non-empty"));
        }
        words.push(w);
    }
    if rng.gen::<f64>() < 0.05 {
        let at = rng.gen_range(0..=words.len());
        words.insert(at, JUNK_TOKENS.choose(rng).expect("non-empty").to_string());
    }
    words.join(" ")
}

/// Effective item values summing to `target` over a trait's twelve items.
fn answers_for(key: &NeoKey, targets: &[i32; 5]) -> Vec<u8> {
    let mut answers = vec![0u8; ITEM_COUNT];
    for t in TraitLabel::ALL {
        let items: Vec<usize> = (0..ITEM_COUNT)
            .filter(|i| key.item_trait[*i] == t)
            .collect();
        let target = targets[t.index()].clamp(12, 60) as usize;
        let (base, extra) = (target / items.len(), target % items.len());
        for (k, &i) in items.iter().enumerate() {
            let eff = (base + usize::from(k < extra)) as u8;
            answers[i] = if key.reversed[i] { 6 - eff } else { eff };
        }
    }
    answers
}

pub fn gen_synthetic_corpus(spec: &SyntheticSpec) -> Result<SyntheticCorpus> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut taken = BTreeSet::new();

    let mut vocab = BTreeMap::new();
    for t in TraitLabel::ALL {
        let words: Vec<String> = (0..spec.vocab_per_trait)
            .map(|_| gen_word(&mut rng, &mut taken))
            .collect();
        vocab.insert(t, words);
    }
    let shared: Vec<String> = (0..spec.shared_vocab)
        .map(|_| gen_word(&mut rng, &mut taken))
        .collect();

    let mut users: Vec<(String, TraitLabel)> = Vec::new();
    for t in TraitLabel::ALL {
        for _ in 0..spec.n_users_per_trait {
            users.push((format!("user_{:03}", users.len() + 1), t));
        }
    }

    let key = NeoKey::cyclic_with_reversals();
    let mut neo_responses = Vec::with_capacity(users.len());
    for (id, planted) in &users {
        let mut targets = [0i32; 5];
        for t in TraitLabel::ALL {
            targets[t.index()] = if t == *planted {
                PLANTED_SCORE + rng.gen_range(-PLANTED_JITTER..=PLANTED_JITTER)
            } else {
                BASE_SCORE + rng.gen_range(-BASE_JITTER..=BASE_JITTER)
            };
        }
        neo_responses.push(NeoResponse {
            respondent_id: id.clone(),
            answers: answers_for(&key, &targets),
        });
    }

    let start: DateTime<Utc> = Utc.with_ymd_and_hms(2021, 1, 1, 8, 0, 0).unwrap();
    let mut export = Vec::new();
    let mut tick = 0i64;
    for m in 0..spec.msgs_per_user {
        for (id, planted) in &users {
            tick += 1;
            let ts = (start + Duration::seconds(37 * tick)).to_rfc3339();
            let text = sentence(&mut rng, &vocab[planted], &shared, spec.noise_rate, (4, 10));
            export.push(ExportRecord {
                sender_id: Some(id.clone()),
                sender_name: Some(id.replace('_', " ")),
                timestamp: Some(ts.clone()),
                kind: Some("text".into()),
                text: Some(text),
            });
            if m % 25 == 24 {
                let kind = ["photo", "audio", "location", "sticker"][(m / 25) % 4];
                export.push(ExportRecord {
                    sender_id: Some(id.clone()),
                    sender_name: Some(id.replace('_', " ")),
                    timestamp: Some(ts),
                    kind: Some(kind.into()),
                    text: None,
                });
            }
        }
    }

    let mut channels = Vec::new();
    let mut channel_traits = BTreeMap::new();
    for t in TraitLabel::ALL {
        let channel_id = format!("channel_{}", t.as_str().to_ascii_lowercase());
        channel_traits.insert(channel_id.clone(), t);
        for p in 0..POSTS_PER_CHANNEL {
            channels.push(ChannelRecord {
                channel_id: channel_id.clone(),
                title: Some(format!("{t} channel")),
                text: sentence(&mut rng, &vocab[&t], &shared, spec.noise_rate, (8, 14)),
                timestamp: Some(start + Duration::hours(p as i64)),
            });
        }
    }

    Ok(SyntheticCorpus {
        spec: *spec,
        export,
        neo_key: key,
        neo_responses,
        channels,
        channel_traits,
        truth: users.into_iter().collect(),
        vocab,
        shared,
    })
}
