//! Index-trait assignment: cosine nearest training user, multinomial naive
//! Bayes and a one-hidden-layer MLP over TF-IDF feature matrices.

pub mod cosine;
pub mod features;
pub mod mlp;
pub mod nb;

pub use cosine::{cosine, nearest_train_user, MatchResult};
pub use features::{
    build_feature_matrix, make_targets, split_train_test, FeatureMatrix, FeatureMode, FeatureSpace,
    FeatureSpaceFile, SplitPlan, TargetMode,
};
pub use mlp::{
    mlp_gradients, mlp_loss, predict_mlp, train_mlp, train_mlp_with_history, MLPModel,
    MlpGradients, MlpHyper,
};
pub use nb::{predict_nb, train_nb, NBModel};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    #[default]
    Cosine,
    Nb,
    Mlp,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Cosine => "cosine",
            Engine::Nb => "nb",
            Engine::Mlp => "mlp",
        }
    }
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Engine {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "cosine" => Ok(Engine::Cosine),
            "nb" => Ok(Engine::Nb),
            "mlp" => Ok(Engine::Mlp),
            _ => Err(crate::Error::Validation(format!(
                "unknown engine {s:?} (cosine|nb|mlp)"
            ))),
        }
    }
}
