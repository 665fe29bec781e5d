//! Run configuration, loaded from JSON with command-line overrides on top.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::classify::{Engine, FeatureMode, MlpHyper, TargetMode};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MlpSettings {
    pub hidden_size: usize,
    pub lr: f64,
    pub epochs: usize,
}

impl Default for MlpSettings {
    fn default() -> Self {
        let h = MlpHyper::default();
        MlpSettings {
            hidden_size: h.hidden_size,
            lr: h.lr,
            epochs: h.epochs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub corpus: Option<PathBuf>,
    pub neo_responses: Option<PathBuf>,
    pub neo_key: Option<PathBuf>,
    /// Channel JSONL, a saved HTML export page, or a directory of pages.
    pub channels: Option<PathBuf>,
    pub feedback: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub min_messages: usize,
    pub split_zwnj: bool,
    /// Only "natural" is supported.
    pub idf_log_base: String,
    pub tol: f64,
    pub test_fraction: f64,
    pub seed: Option<u64>,
    pub engine: Engine,
    pub feature_mode: FeatureMode,
    pub target_mode: TargetMode,
    pub max_features: usize,
    pub alpha: f64,
    pub mlp: MlpSettings,
    pub k: usize,
    pub trait_gate: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            corpus: None,
            neo_responses: None,
            neo_key: None,
            channels: None,
            feedback: None,
            stopwords: None,
            output_dir: PathBuf::from("out"),
            min_messages: 100,
            split_zwnj: true,
            idf_log_base: "natural".into(),
            tol: 6.0,
            test_fraction: 1.0 / 3.0,
            seed: None,
            engine: Engine::Cosine,
            feature_mode: FeatureMode::Tfidf,
            target_mode: TargetMode::FromNeo,
            max_features: 2000,
            alpha: crate::classify::nb::DEFAULT_ALPHA,
            mlp: MlpSettings::default(),
            k: 5,
            trait_gate: false,
        }
    }
}

impl Config {
    /// Reads a config file; relative paths are resolved against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingInput(path.to_path_buf()));
        }
        let mut cfg: Config = serde_json::from_slice(&fs::read(path)?)?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.rebase(base);
        cfg.validate()?;
        Ok(cfg)
    }

    fn rebase(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for p in [
            &mut self.corpus,
            &mut self.neo_responses,
            &mut self.neo_key,
            &mut self.channels,
            &mut self.feedback,
            &mut self.stopwords,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
        fix(&mut self.output_dir);
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Validation(m));
        if self.min_messages == 0 {
            return bad("min_messages must be at least 1".into());
        }
        if self.idf_log_base != "natural" {
            return bad(format!(
                "idf_log_base {:?} unsupported (natural only)",
                self.idf_log_base
            ));
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return bad(format!("tol must be non-negative, got {}", self.tol));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return bad(format!(
                "test_fraction {} outside (0, 1)",
                self.test_fraction
            ));
        }
        if self.max_features == 0 {
            return bad("max_features must be positive".into());
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be positive, got {}", self.alpha));
        }
        if self.mlp.hidden_size == 0 || !(self.mlp.lr > 0.0 && self.mlp.lr.is_finite()) {
            return bad("mlp.hidden_size and mlp.lr must be positive".into());
        }
        if self.k == 0 {
            return bad("k must be positive".into());
        }
        Ok(())
    }

    pub fn require_seed(&self, stage: &str) -> Result<u64> {
        self.seed
            .ok_or_else(|| Error::Validation(format!("--seed is required for {stage}")))
    }

    pub fn mlp_hyper(&self, seed: u64) -> MlpHyper {
        MlpHyper {
            hidden_size: self.mlp.hidden_size,
            lr: self.mlp.lr,
            epochs: self.mlp.epochs,
            seed,
        }
    }
}
