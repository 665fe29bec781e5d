//! Big Five trait profiling of chat authors from TF-IDF lexicons, and
//! content-based channel recommendation over the same term space.
//!
//! The pipeline runs in stages: [`ingest`] parses and cleans a chat export,
//! [`lexicon`] builds per-user TF-IDF profiles, [`neo`] scores questionnaire
//! responses into trait vectors, [`classify`] assigns index traits,
//! [`channels`] profiles channels like users, [`recommend`] ranks channels
//! per user and [`eval`] computes the reported accuracies.

pub mod channels;
pub mod classify;
pub mod config;
pub mod error;
pub mod eval;
pub mod ingest;
pub mod lexicon;
pub mod neo;
pub mod pipeline;
pub mod profile;
pub mod recommend;

pub use channels::{ChannelPost, ChannelProfile, TrainedEngines};
pub use classify::{
    Engine, FeatureMode, MLPModel, MatchResult, MlpHyper, NBModel, SplitPlan, TargetMode,
};
pub use config::Config;
pub use error::{Error, Result};
pub use eval::{EvalReport, FeedbackRecord, SyntheticCorpus, SyntheticSpec};
pub use ingest::{CleanMessage, MessageKind, MessageStore, RawMessage};
pub use lexicon::{GlobalLexicon, TermCounts, Tokenizer, TraitLexicon, WeightVector};
pub use neo::{NeoKey, NeoResponse, TraitLabel, TraitVector};
pub use profile::Profile;
pub use recommend::Recommendation;
