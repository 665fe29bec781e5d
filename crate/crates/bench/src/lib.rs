//! Fixtures shared by the benchmarks under `benches/`.

use traitcast_core::classify::{build_feature_matrix, FeatureMode};
use traitcast_core::eval::gen_synthetic_corpus;
use traitcast_core::lexicon::{build_global_lexicon, build_term_counts, compute_tfidf};
use traitcast_core::{GlobalLexicon, Profile, SyntheticSpec, TermCounts, Tokenizer, TraitLabel};

pub struct Fixture {
    pub counts: Vec<TermCounts>,
    pub lexicon: GlobalLexicon,
    pub profiles: Vec<Profile>,
    pub x: Vec<Vec<f64>>,
    pub y: Vec<TraitLabel>,
}

/// Profiles and a feature matrix for a synthetic corpus with `users_per_trait`
/// users per trait (labels are the planted traits).
pub fn fixture(users_per_trait: usize) -> Fixture {
    let spec = SyntheticSpec {
        n_users_per_trait: users_per_trait,
        ..SyntheticSpec::canonical()
    };
    let corpus = gen_synthetic_corpus(&spec).expect("valid spec");
    let store = corpus.store().expect("synthetic export parses");
    let tok = Tokenizer::default();
    let counts: Vec<TermCounts> = corpus
        .truth
        .keys()
        .map(|id| build_term_counts(&store, id, &tok).expect("user has text"))
        .collect();
    let lexicon = build_global_lexicon(&counts).expect("non-empty corpus");
    let profiles: Vec<Profile> = counts
        .iter()
        .map(|tc| Profile::new(tc.clone(), compute_tfidf(tc, &lexicon)))
        .collect();
    let fm = build_feature_matrix(&profiles, &lexicon, FeatureMode::Tfidf, 2000).expect("profiles");
    let y = corpus.truth.values().copied().collect();
    Fixture {
        counts,
        lexicon,
        profiles,
        x: fm.values,
        y,
    }
}
