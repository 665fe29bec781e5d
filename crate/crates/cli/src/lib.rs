//! The `traitcast` command line: one subcommand per pipeline stage plus
//! `synth` and `all`. Flags override the JSON config file.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use traitcast_core::classify::{Engine, FeatureMode, TargetMode};
use traitcast_core::pipeline;
use traitcast_core::{Config, Error, Result, SyntheticSpec};

#[derive(Debug, Parser)]
#[command(
    name = "traitcast",
    version,
    about = "Big Five profiling of chat authors and channels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Append a chat export to the message store.
    Ingest,
    /// Score NEO questionnaire responses.
    NeoScore,
    /// Build the global lexicon and per-user profiles.
    Lexicon,
    /// Split users and train naive Bayes and the MLP.
    Train,
    /// Classify held-out users with all three engines.
    Classify,
    /// Profile and label channels.
    Channels,
    /// Rank channels for every profiled user.
    Recommend,
    /// Write the evaluation report.
    Evaluate,
    /// Generate a synthetic corpus and a config that runs `all` on it.
    Synth(SynthArgs),
    /// Run every stage from a fresh store.
    All,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub users_per_trait: Option<usize>,
    #[arg(long)]
    pub vocab_per_trait: Option<usize>,
    #[arg(long)]
    pub shared_vocab: Option<usize>,
    #[arg(long)]
    pub msgs_per_user: Option<usize>,
    #[arg(long)]
    pub noise_rate: Option<f64>,
}

/// Config fields as flags; every one is optional and wins over the file.
#[derive(Debug, Default, Args)]
pub struct Overrides {
    /// JSON config file; relative paths inside it resolve against its directory.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub corpus: Option<PathBuf>,
    #[arg(long, global = true)]
    pub neo_responses: Option<PathBuf>,
    #[arg(long, global = true)]
    pub neo_key: Option<PathBuf>,
    #[arg(long, global = true)]
    pub channels: Option<PathBuf>,
    #[arg(long, global = true)]
    pub feedback: Option<PathBuf>,
    #[arg(long, global = true)]
    pub stopwords: Option<PathBuf>,
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub min_messages: Option<usize>,
    #[arg(long, global = true)]
    pub split_zwnj: Option<bool>,
    #[arg(long, global = true)]
    pub idf_log_base: Option<String>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub test_fraction: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// cosine | nb | mlp
    #[arg(long, global = true)]
    pub engine: Option<Engine>,
    /// tfidf | tfidf-times-idf
    #[arg(long, global = true)]
    pub feature_mode: Option<FeatureMode>,
    /// from-neo | from-cosine
    #[arg(long, global = true)]
    pub target_mode: Option<TargetMode>,
    #[arg(long, global = true)]
    pub max_features: Option<usize>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true)]
    pub mlp_hidden_size: Option<usize>,
    #[arg(long, global = true)]
    pub mlp_lr: Option<f64>,
    #[arg(long, global = true)]
    pub mlp_epochs: Option<usize>,
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Only recommend channels whose trait matches the user's.
    #[arg(long, global = true)]
    pub trait_gate: bool,
}

impl Overrides {
    pub fn resolve(&self) -> Result<Config> {
        let mut c = match &self.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        macro_rules! set {
            ($($field:ident => $target:expr),* $(,)?) => {
                $(if let Some(v) = &self.$field { $target = v.clone().into(); })*
            };
        }
        set! {
            corpus => c.corpus,
            neo_responses => c.neo_responses,
            neo_key => c.neo_key,
            channels => c.channels,
            feedback => c.feedback,
            stopwords => c.stopwords,
            output_dir => c.output_dir,
            min_messages => c.min_messages,
            split_zwnj => c.split_zwnj,
            idf_log_base => c.idf_log_base,
            tol => c.tol,
            test_fraction => c.test_fraction,
            seed => c.seed,
            engine => c.engine,
            feature_mode => c.feature_mode,
            target_mode => c.target_mode,
            max_features => c.max_features,
            alpha => c.alpha,
            mlp_hidden_size => c.mlp.hidden_size,
            mlp_lr => c.mlp.lr,
            mlp_epochs => c.mlp.epochs,
            k => c.k,
        }
        if self.trait_gate {
            c.trait_gate = true;
        }
        c.validate()?;
        Ok(c)
    }
}

fn synth_spec(args: &SynthArgs, seed: u64) -> SyntheticSpec {
    let base = SyntheticSpec::canonical();
    SyntheticSpec {
        seed,
        n_users_per_trait: args.users_per_trait.unwrap_or(base.n_users_per_trait),
        vocab_per_trait: args.vocab_per_trait.unwrap_or(base.vocab_per_trait),
        shared_vocab: args.shared_vocab.unwrap_or(base.shared_vocab),
        msgs_per_user: args.msgs_per_user.unwrap_or(base.msgs_per_user),
        noise_rate: args.noise_rate.unwrap_or(base.noise_rate),
    }
}

pub fn execute(cli: &Cli) -> Result<Vec<String>> {
    let cfg = cli.overrides.resolve()?;
    let one = |s: Result<String>| s.map(|line| vec![line]);
    match &cli.command {
        Command::Ingest => one(pipeline::ingest(&cfg)),
        Command::NeoScore => one(pipeline::neo_score(&cfg)),
        Command::Lexicon => one(pipeline::lexicon(&cfg)),
        Command::Train => {
            cfg.require_seed("train")?;
            one(pipeline::train(&cfg))
        }
        Command::Classify => one(pipeline::classify(&cfg)),
        Command::Channels => one(pipeline::channels(&cfg)),
        Command::Recommend => one(pipeline::recommend(&cfg)),
        Command::Evaluate => one(pipeline::evaluate(&cfg)),
        Command::Synth(args) => {
            // the flag itself, not a config value, picks the fixture
            let seed = cli
                .overrides
                .seed
                .ok_or_else(|| Error::Validation("--seed is required for synth".into()))?;
            one(pipeline::synth(&cfg, &synth_spec(args, seed)))
        }
        Command::All => {
            cfg.require_seed("all")?;
            pipeline::run_all(&cfg)
        }
    }
}

/// 0 on success, 2 on I/O failure, 1 on anything else.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_io() {
        2
    } else {
        1
    }
}

pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(lines) => {
            for l in lines {
                let _ = writeln!(out, "{l}");
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
