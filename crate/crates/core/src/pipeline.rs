//! End-to-end stages. Each stage reads its inputs from the configured paths
//! or from earlier stages' files in the output directory, writes its own
//! files there and returns a one-line summary.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::channels::{
    build_channel_profile, classify_channel, parse_channel_html_export, read_channel_jsonl,
    ChannelPost, ChannelProfile, ChannelTitles, TrainedEngines,
};
use crate::classify::{
    build_feature_matrix, make_targets, nearest_train_user, predict_mlp, predict_nb,
    split_train_test, train_mlp, train_nb, FeatureSpace, FeatureSpaceFile, MLPModel, MatchResult,
    NBModel, SplitPlan,
};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::eval::{
    classifier_accuracy, gen_synthetic_corpus, message_histogram, pairwise_accuracy,
    read_feedback_csv, satisfaction_rate, EvalReport, SyntheticSpec,
};
use crate::ingest::{active_users, clean_records, parse_chat_export, MessageStore};
use crate::lexicon::{
    build_global_lexicon, build_term_counts, build_trait_lexicon, compute_tfidf, GlobalLexicon,
    Tokenizer,
};
use crate::neo::{
    read_responses_csv, score_neo, write_responses_csv, NeoKey, TraitLabel, TraitVector,
};
use crate::profile::{read_profiles, write_profiles, Profile};
use crate::recommend::batch_recommend;

pub const STORE: &str = "store.jsonl";
pub const ACTIVITY: &str = "activity.json";
pub const NEO_SCORES: &str = "neo_scores.json";
pub const LEXICON: &str = "lexicon.json";
pub const PROFILES: &str = "profiles.jsonl";
pub const TRAIT_LEXICON: &str = "trait_lexicon.json";
pub const FEATURES: &str = "features.json";
pub const SPLIT: &str = "split.json";
pub const TARGETS: &str = "targets.json";
pub const NB_MODEL: &str = "nb_model.json";
pub const MLP_MODEL: &str = "mlp_model.json";
pub const PREDICTIONS: &str = "predictions.json";
pub const CHANNEL_PROFILES: &str = "channel_profiles.jsonl";
pub const RECOMMENDATIONS: &str = "recommendations.jsonl";
pub const REPORT: &str = "report.json";
pub const REPORT_TEXT: &str = "report.txt";

/// Per-test-row classifier outputs written by [`classify`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowPrediction {
    pub owner_id: String,
    pub actual: Option<TraitLabel>,
    pub nb: TraitLabel,
    pub mlp: TraitLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Predictions {
    pub matches: Vec<MatchResult>,
    /// Test users with no conversation to match on.
    pub unmatched: Vec<String>,
    pub rows: Vec<RowPrediction>,
}

fn out(cfg: &Config, name: &str) -> PathBuf {
    cfg.output_dir.join(name)
}

fn require(path: &Path) -> Result<&Path> {
    if path.exists() {
        Ok(path)
    } else {
        Err(Error::MissingInput(path.to_path_buf()))
    }
}

fn configured<'a>(p: &'a Option<PathBuf>, what: &str) -> Result<&'a Path> {
    let p = p
        .as_deref()
        .ok_or_else(|| Error::Validation(format!("no {what} path configured")))?;
    require(p)
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_reader(BufReader::new(File::open(
        require(path)?,
    )?))?)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    fs::write(path, bytes)?;
    Ok(())
}

fn tokenizer(cfg: &Config) -> Result<Tokenizer> {
    let stopwords = match &cfg.stopwords {
        Some(p) => Tokenizer::read_stopwords(File::open(require(p)?)?)?,
        None => Default::default(),
    };
    Ok(Tokenizer {
        split_zwnj: cfg.split_zwnj,
        stopwords,
    })
}

fn ensure_out(cfg: &Config) -> Result<()> {
    fs::create_dir_all(&cfg.output_dir)?;
    Ok(())
}

/// Appends the configured chat export to the store. Not idempotent.
pub fn ingest(cfg: &Config) -> Result<String> {
    let src = configured(&cfg.corpus, "corpus")?;
    ensure_out(cfg)?;
    let accepted = clean_records(parse_chat_export(File::open(src)?)?);
    let path = out(cfg, STORE);
    let mut store = MessageStore::load(&path)?;
    store.append_to(&path, &accepted)?;
    write_json(&out(cfg, ACTIVITY), &message_histogram(&store))?;
    Ok(format!(
        "ingest: appended {} messages ({} stored, {} senders)",
        accepted.len(),
        store.len(),
        store.counts().len()
    ))
}

pub fn neo_score(cfg: &Config) -> Result<String> {
    let responses = read_responses_csv(File::open(configured(
        &cfg.neo_responses,
        "neo_responses",
    )?)?)?;
    let key = NeoKey::from_json_reader(File::open(configured(&cfg.neo_key, "neo_key")?)?)?;
    ensure_out(cfg)?;
    let mut scores = BTreeMap::new();
    for r in &responses {
        scores.insert(r.respondent_id.clone(), score_neo(r, &key)?);
    }
    write_json(&out(cfg, NEO_SCORES), &scores)?;
    Ok(format!("neo-score: scored {} respondents", scores.len()))
}

/// Builds profiles for active users, the global lexicon and the trait lexicon.
pub fn lexicon(cfg: &Config) -> Result<String> {
    let store = MessageStore::load(require(&out(cfg, STORE))?)?;
    let tok = tokenizer(cfg)?;
    let mut users = active_users(&store, cfg.min_messages);
    users.sort();
    if users.is_empty() {
        return Err(Error::Validation(format!(
            "no sender has at least {} messages",
            cfg.min_messages
        )));
    }
    let counts = users
        .iter()
        .map(|u| build_term_counts(&store, u, &tok))
        .collect::<Result<Vec<_>>>()?;
    let lex = build_global_lexicon(&counts)?;

    let neo_path = out(cfg, NEO_SCORES);
    let neo: BTreeMap<String, TraitVector> = if neo_path.exists() {
        read_json(&neo_path)?
    } else {
        BTreeMap::new()
    };
    let profiles: Vec<Profile> = counts
        .into_iter()
        .map(|c| {
            let tfidf = compute_tfidf(&c, &lex);
            let p = Profile::new(c, tfidf);
            match neo.get(&p.owner_id) {
                Some(tv) => p.with_neo(*tv),
                None => p,
            }
        })
        .collect();
    let trait_lex = build_trait_lexicon(
        profiles
            .iter()
            .filter_map(|p| p.index_trait.map(|t| (t, &p.tfidf))),
    );

    write_json(&out(cfg, LEXICON), &lex)?;
    write_profiles(&out(cfg, PROFILES), &profiles)?;
    write_json(&out(cfg, TRAIT_LEXICON), &trait_lex)?;
    let labeled = profiles.iter().filter(|p| p.neo.is_some()).count();
    Ok(format!(
        "lexicon: {} active users ({labeled} with NEO scores), {} terms",
        profiles.len(),
        lex.len()
    ))
}

fn load_profiles(cfg: &Config) -> Result<Vec<Profile>> {
    read_profiles(require(&out(cfg, PROFILES))?)
}

fn load_lexicon(cfg: &Config) -> Result<GlobalLexicon> {
    read_json(&out(cfg, LEXICON))
}

fn labels_for(
    rows: &[usize],
    profiles: &[Profile],
    targets: &BTreeMap<String, TraitLabel>,
) -> (Vec<usize>, Vec<TraitLabel>) {
    rows.iter()
        .filter_map(|&i| targets.get(&profiles[i].owner_id).map(|l| (i, *l)))
        .unzip()
}

pub fn train(cfg: &Config) -> Result<String> {
    let seed = cfg.require_seed("train")?;
    let profiles = load_profiles(cfg)?;
    let lex = load_lexicon(cfg)?;
    let fm = build_feature_matrix(&profiles, &lex, cfg.feature_mode, cfg.max_features)?;
    let plan = split_train_test(profiles.len(), cfg.test_fraction, seed)?;
    let train_refs: Vec<Profile> = plan
        .train_rows
        .iter()
        .map(|&i| profiles[i].clone())
        .filter(|p| p.index_trait.is_some())
        .collect();
    let targets = make_targets(&profiles, cfg.target_mode, &train_refs)?;

    let (rows, y) = labels_for(&plan.train_rows, &profiles, &targets);
    if rows.is_empty() {
        return Err(Error::Validation("no labeled training rows".into()));
    }
    let x = fm.select(&rows);
    let nb = train_nb(&x, &y, cfg.alpha)?;
    let mlp = train_mlp(&x, &y, &cfg.mlp_hyper(seed))?;

    write_json(&out(cfg, FEATURES), &fm.space.to_file())?;
    write_json(&out(cfg, SPLIT), &plan)?;
    write_json(&out(cfg, TARGETS), &targets)?;
    write_json(&out(cfg, NB_MODEL), &nb)?;
    write_json(&out(cfg, MLP_MODEL), &mlp)?;
    Ok(format!(
        "train: {} train / {} test rows, {} feature columns, {} classes",
        plan.train_rows.len(),
        plan.test_rows.len(),
        fm.space.width(),
        nb.classes.len()
    ))
}

struct Trained {
    profiles: Vec<Profile>,
    plan: SplitPlan,
    engines: TrainedEngines,
}

fn load_trained(cfg: &Config) -> Result<Trained> {
    let profiles = load_profiles(cfg)?;
    let lex = load_lexicon(cfg)?;
    let space = FeatureSpace::from_file(read_json::<FeatureSpaceFile>(&out(cfg, FEATURES))?, &lex)?;
    let plan: SplitPlan = read_json(&out(cfg, SPLIT))?;
    if let Some(&bad) = plan
        .test_rows
        .iter()
        .chain(&plan.train_rows)
        .find(|&&i| i >= profiles.len())
    {
        return Err(Error::Validation(format!(
            "split row {bad} out of range for {} profiles",
            profiles.len()
        )));
    }
    let nb: NBModel = read_json(&out(cfg, NB_MODEL))?;
    let mlp: MLPModel = read_json(&out(cfg, MLP_MODEL))?;
    mlp.validate()?;
    let train_profiles = plan
        .train_rows
        .iter()
        .map(|&i| profiles[i].clone())
        .filter(|p| p.index_trait.is_some())
        .collect();
    Ok(Trained {
        engines: TrainedEngines {
            train_profiles,
            space: Some(space),
            nb: Some(nb),
            mlp: Some(mlp),
        },
        profiles,
        plan,
    })
}

/// Classifies the held-out users with all three engines.
pub fn classify(cfg: &Config) -> Result<String> {
    let t = load_trained(cfg)?;
    let targets: BTreeMap<String, TraitLabel> = read_json(&out(cfg, TARGETS))?;
    let space = t.engines.space.as_ref().expect("loaded");
    let (nb, mlp) = (
        t.engines.nb.as_ref().expect("loaded"),
        t.engines.mlp.as_ref().expect("loaded"),
    );
    let mut preds = Predictions {
        matches: vec![],
        unmatched: vec![],
        rows: vec![],
    };
    for &i in &t.plan.test_rows {
        let p = &t.profiles[i];
        if p.tfidf.is_zero() {
            preds.unmatched.push(p.owner_id.clone());
            continue;
        }
        preds
            .matches
            .push(nearest_train_user(p, &t.engines.train_profiles, cfg.tol)?);
        let row = space.row(&p.tfidf);
        preds.rows.push(RowPrediction {
            owner_id: p.owner_id.clone(),
            actual: targets.get(&p.owner_id).copied(),
            nb: predict_nb(nb, &row)?.0,
            mlp: predict_mlp(mlp, &row)?.0,
        });
    }
    write_json(&out(cfg, PREDICTIONS), &preds)?;
    Ok(format!(
        "classify: {} test users matched, {} without conversation",
        preds.matches.len(),
        preds.unmatched.len()
    ))
}

fn load_channel_posts(path: &Path) -> Result<(Vec<ChannelPost>, ChannelTitles)> {
    let stem = |p: &Path| {
        p.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    };
    let is_html = |p: &Path| matches!(p.extension().and_then(|e| e.to_str()), Some("html" | "htm"));
    if path.is_dir() {
        let mut pages: Vec<PathBuf> = fs::read_dir(path)?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<Vec<_>>>()?;
        pages.retain(|p| is_html(p));
        pages.sort();
        let mut posts = Vec::new();
        let mut titles = Vec::new();
        for page in pages {
            let id = stem(&page);
            posts.extend(parse_channel_html_export(File::open(&page)?, &id)?);
            titles.push((id.clone(), id));
        }
        Ok((posts, titles))
    } else if is_html(path) {
        let id = stem(path);
        Ok((
            parse_channel_html_export(File::open(path)?, &id)?,
            vec![(id.clone(), id)],
        ))
    } else {
        read_channel_jsonl(File::open(path)?)
    }
}

/// Profiles every channel against the user lexicon and assigns it a trait.
pub fn channels(cfg: &Config) -> Result<String> {
    let (posts, titles) = load_channel_posts(configured(&cfg.channels, "channels")?)?;
    let t = load_trained(cfg)?;
    let lex = load_lexicon(cfg)?;
    let tok = tokenizer(cfg)?;
    let mut profiles = Vec::new();
    let mut skipped = Vec::new();
    for (id, title) in &titles {
        let own: Vec<ChannelPost> = posts
            .iter()
            .filter(|p| &p.channel_id == id)
            .cloned()
            .collect();
        match build_channel_profile(id, title, &own, &lex, &tok) {
            Ok(mut cp) => {
                cp.trait_label = Some(classify_channel(&cp, cfg.engine, &t.engines)?);
                profiles.push(cp);
            }
            Err(Error::Validation(_)) => skipped.push(id.clone()),
            Err(e) => return Err(e),
        }
    }
    profiles.sort_by(|a, b| a.channel_id.cmp(&b.channel_id));
    let as_profiles: Vec<Profile> = profiles.iter().map(ChannelProfile::to_profile).collect();
    write_profiles(&out(cfg, CHANNEL_PROFILES), &as_profiles)?;
    let mut summary = format!(
        "channels: profiled {} channels with {}",
        profiles.len(),
        cfg.engine
    );
    if !skipped.is_empty() {
        summary.push_str(&format!(
            ", skipped {} without usable vocabulary ({})",
            skipped.len(),
            skipped.join(", ")
        ));
    }
    Ok(summary)
}

pub fn recommend(cfg: &Config) -> Result<String> {
    let users = load_profiles(cfg)?;
    let channels: Vec<ChannelProfile> = read_profiles(require(&out(cfg, CHANNEL_PROFILES))?)?
        .into_iter()
        .map(ChannelProfile::from_profile)
        .collect();
    let batch = batch_recommend(&users, &channels, cfg.k, cfg.trait_gate)?;
    let mut body = String::new();
    for line in batch.lines() {
        body.push_str(&serde_json::to_string(&line)?);
        body.push('\n');
    }
    fs::write(out(cfg, RECOMMENDATIONS), body)?;
    Ok(format!(
        "recommend: {} users ranked against {} channels, {} skipped",
        batch.recommendations.len(),
        channels.len(),
        batch.skipped.len()
    ))
}

pub fn build_report(preds: &Predictions, satisfaction_pct: Option<f64>) -> Result<EvalReport> {
    let scored: Vec<MatchResult> = preds
        .matches
        .iter()
        .filter(|m| m.s_score.is_some())
        .cloned()
        .collect();
    let labeled: Vec<&RowPrediction> = preds.rows.iter().filter(|r| r.actual.is_some()).collect();
    let actual: Vec<TraitLabel> = labeled.iter().filter_map(|r| r.actual).collect();
    let nb: Vec<TraitLabel> = labeled.iter().map(|r| r.nb).collect();
    let mlp: Vec<TraitLabel> = labeled.iter().map(|r| r.mlp).collect();
    Ok(EvalReport {
        cosine_accuracy_pct: pairwise_accuracy(&scored)?,
        nb_accuracy_pct: classifier_accuracy(&nb, &actual)?,
        mlp_accuracy_pct: classifier_accuracy(&mlp, &actual)?,
        satisfaction_pct,
        matched_pairs: scored.len(),
        per_pair: scored,
    })
}

pub fn evaluate(cfg: &Config) -> Result<String> {
    let preds: Predictions = read_json(&out(cfg, PREDICTIONS))?;
    let satisfaction = match &cfg.feedback {
        Some(p) => Some(satisfaction_rate(&read_feedback_csv(File::open(
            require(p)?,
        )?)?)?),
        None => None,
    };
    let report = build_report(&preds, satisfaction)?;
    write_json(&out(cfg, REPORT), &report)?;
    let summary = report.summary();
    fs::write(out(cfg, REPORT_TEXT), &summary)?;
    Ok(format!(
        "evaluate: cosine {:.2}%, bayes {:.2}%, mlp {:.2}%",
        report.cosine_accuracy_pct, report.nb_accuracy_pct, report.mlp_accuracy_pct
    ))
}

/// File names written by [`synth`] into the output directory.
pub const SYNTH_CHAT: &str = "chat.jsonl";
pub const SYNTH_NEO: &str = "neo_responses.csv";
pub const SYNTH_KEY: &str = "neo_key.json";
pub const SYNTH_CHANNELS: &str = "channels.jsonl";
pub const SYNTH_TRUTH: &str = "truth.json";
pub const SYNTH_CONFIG: &str = "config.json";

/// Writes a synthetic corpus plus a config that runs `all` over it in place.
pub fn synth(cfg: &Config, spec: &SyntheticSpec) -> Result<String> {
    let corpus = gen_synthetic_corpus(spec)?;
    ensure_out(cfg)?;
    fs::write(out(cfg, SYNTH_CHAT), corpus.export_jsonl())?;
    write_responses_csv(File::create(out(cfg, SYNTH_NEO))?, &corpus.neo_responses)?;
    write_json(&out(cfg, SYNTH_KEY), &corpus.neo_key)?;
    fs::write(out(cfg, SYNTH_CHANNELS), corpus.channel_jsonl())?;
    #[derive(Serialize)]
    struct Truth<'a> {
        users: &'a BTreeMap<String, TraitLabel>,
        channels: &'a BTreeMap<String, TraitLabel>,
    }
    write_json(
        &out(cfg, SYNTH_TRUTH),
        &Truth {
            users: &corpus.truth,
            channels: &corpus.channel_traits,
        },
    )?;
    let run_cfg = Config {
        corpus: Some(SYNTH_CHAT.into()),
        neo_responses: Some(SYNTH_NEO.into()),
        neo_key: Some(SYNTH_KEY.into()),
        channels: Some(SYNTH_CHANNELS.into()),
        output_dir: PathBuf::from("."),
        seed: Some(spec.seed),
        min_messages: cfg.min_messages.min(spec.msgs_per_user),
        feedback: None,
        stopwords: None,
        ..cfg.clone()
    };
    write_json(&out(cfg, SYNTH_CONFIG), &run_cfg)?;
    Ok(format!(
        "synth: {} users, {} export records, {} channels (seed {})",
        corpus.truth.len(),
        corpus.export.len(),
        corpus.channel_traits.len(),
        spec.seed
    ))
}

/// Runs every stage from a fresh store. Optional stages (NEO scoring,
/// channels, recommendations) run when their inputs are configured.
pub fn run_all(cfg: &Config) -> Result<Vec<String>> {
    ensure_out(cfg)?;
    for f in [STORE, "store.index.json", NEO_SCORES] {
        let p = out(cfg, f);
        if p.exists() {
            fs::remove_file(p)?;
        }
    }
    let mut lines = vec![ingest(cfg)?];
    if cfg.neo_responses.is_some() {
        lines.push(neo_score(cfg)?);
    }
    lines.push(lexicon(cfg)?);
    lines.push(train(cfg)?);
    lines.push(classify(cfg)?);
    if cfg.channels.is_some() {
        lines.push(channels(cfg)?);
        lines.push(recommend(cfg)?);
    }
    lines.push(evaluate(cfg)?);
    Ok(lines)
}
