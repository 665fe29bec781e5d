use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cosine::nearest_train_user;
use crate::error::{Error, Result};
use crate::lexicon::{GlobalLexicon, WeightVector};
use crate::neo::{index_trait, TraitLabel};
use crate::profile::Profile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureMode {
    /// Cell = TF-IDF weight.
    #[default]
    Tfidf,
    /// Cell = TF-IDF weight times the column's IDF.
    TfidfTimesIdf,
}

impl std::str::FromStr for FeatureMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tfidf" => Ok(FeatureMode::Tfidf),
            "tfidf-times-idf" => Ok(FeatureMode::TfidfTimesIdf),
            _ => Err(Error::Validation(format!(
                "unknown feature mode {s:?} (tfidf|tfidf-times-idf)"
            ))),
        }
    }
}

/// Column layout shared by training rows and anything vectorized later.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpace {
    pub mode: FeatureMode,
    pub columns: Vec<String>,
    idf: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureSpaceFile {
    pub mode: FeatureMode,
    pub columns: Vec<String>,
}

impl FeatureSpace {
    /// The `max_features` highest-idf lexicon terms, ties by term order.
    pub fn from_lexicon(
        lex: &GlobalLexicon,
        mode: FeatureMode,
        max_features: usize,
    ) -> Result<Self> {
        if max_features == 0 {
            return Err(Error::validation("max_features must be positive"));
        }
        if lex.is_empty() {
            return Err(Error::validation("empty vocabulary: no feature columns"));
        }
        let mut terms: Vec<(&String, f64)> = lex.idf_table().iter().map(|(t, i)| (t, *i)).collect();
        terms.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        terms.truncate(max_features);
        Ok(FeatureSpace {
            mode,
            columns: terms.iter().map(|(t, _)| (*t).clone()).collect(),
            idf: terms.iter().map(|(_, i)| *i).collect(),
        })
    }

    /// Restores a saved column layout; idf values come from `lex`.
    pub fn from_file(file: FeatureSpaceFile, lex: &GlobalLexicon) -> Result<Self> {
        let idf = file
            .columns
            .iter()
            .map(|t| {
                lex.idf(t).ok_or_else(|| {
                    Error::validation(format!("feature column {t:?} missing from lexicon"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FeatureSpace {
            mode: file.mode,
            columns: file.columns,
            idf,
        })
    }

    pub fn to_file(&self) -> FeatureSpaceFile {
        FeatureSpaceFile {
            mode: self.mode,
            columns: self.columns.clone(),
        }
    }

    pub fn width(&self) -> usize {
        self.columns.len()
    }

    pub fn row(&self, wv: &WeightVector) -> Vec<f64> {
        self.columns
            .iter()
            .zip(&self.idf)
            .map(|(t, idf)| {
                let w = wv.weights.get(t).copied().unwrap_or(0.0);
                match self.mode {
                    FeatureMode::Tfidf => w,
                    FeatureMode::TfidfTimesIdf => w * idf,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub row_ids: Vec<String>,
    pub space: FeatureSpace,
    pub values: Vec<Vec<f64>>,
}

impl FeatureMatrix {
    pub fn columns(&self) -> &[String] {
        &self.space.columns
    }

    pub fn select(&self, rows: &[usize]) -> Vec<Vec<f64>> {
        rows.iter().map(|&i| self.values[i].clone()).collect()
    }
}

pub fn build_feature_matrix(
    profiles: &[Profile],
    lex: &GlobalLexicon,
    mode: FeatureMode,
    max_features: usize,
) -> Result<FeatureMatrix> {
    if profiles.is_empty() {
        return Err(Error::validation(
            "feature matrix needs at least one profile",
        ));
    }
    let space = FeatureSpace::from_lexicon(lex, mode, max_features)?;
    Ok(FeatureMatrix {
        row_ids: profiles.iter().map(|p| p.owner_id.clone()).collect(),
        values: profiles.iter().map(|p| space.row(&p.tfidf)).collect(),
        space,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub seed: u64,
    pub test_fraction: f64,
    pub test_rows: Vec<usize>,
    pub train_rows: Vec<usize>,
}

/// Seeded shuffle; the first `round(n * test_fraction)` rows (clamped to
/// `[1, n - 1]`, halves rounded up) become the test set.
pub fn split_train_test(n_rows: usize, test_fraction: f64, seed: u64) -> Result<SplitPlan> {
    if n_rows < 3 {
        return Err(Error::validation(format!(
            "need at least 3 rows to split, got {n_rows}"
        )));
    }
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::validation(format!(
            "test_fraction {test_fraction} outside (0, 1)"
        )));
    }
    let n_test = ((n_rows as f64 * test_fraction + 0.5).floor() as usize).clamp(1, n_rows - 1);
    let mut order: Vec<usize> = (0..n_rows).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut test_rows = order[..n_test].to_vec();
    let mut train_rows = order[n_test..].to_vec();
    test_rows.sort_unstable();
    train_rows.sort_unstable();
    Ok(SplitPlan {
        seed,
        test_fraction,
        test_rows,
        train_rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetMode {
    /// Index trait of each profile's own NEO scores.
    #[default]
    FromNeo,
    /// Label of the nearest labeled training user.
    FromCosine,
}

impl std::str::FromStr for TargetMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "from-neo" => Ok(TargetMode::FromNeo),
            "from-cosine" => Ok(TargetMode::FromCosine),
            _ => Err(Error::Validation(format!(
                "unknown target mode {s:?} (from-neo|from-cosine)"
            ))),
        }
    }
}

/// Labels for `profiles`. In cosine mode, profiles with empty vectors get no
/// label and are left out of the map.
pub fn make_targets(
    profiles: &[Profile],
    mode: TargetMode,
    train_refs: &[Profile],
) -> Result<BTreeMap<String, TraitLabel>> {
    let mut out = BTreeMap::new();
    match mode {
        TargetMode::FromNeo => {
            for p in profiles {
                let neo = p.neo.as_ref().ok_or_else(|| {
                    Error::validation(format!("profile {:?} has no NEO scores", p.owner_id))
                })?;
                out.insert(p.owner_id.clone(), index_trait(neo));
            }
        }
        TargetMode::FromCosine => {
            if let Some(p) = train_refs.iter().find(|p| p.index_trait.is_none()) {
                return Err(Error::validation(format!(
                    "training user {:?} has no trait label",
                    p.owner_id
                )));
            }
            for p in profiles.iter().filter(|p| !p.tfidf.is_zero()) {
                let m = nearest_train_user(p, train_refs, 0.0)?;
                if let Some(label) = m.predicted {
                    out.insert(p.owner_id.clone(), label);
                }
            }
        }
    }
    Ok(out)
}
