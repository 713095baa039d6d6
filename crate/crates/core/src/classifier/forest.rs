use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{DecisionTree, TreeParams};
use crate::error::{MetaqaError, Result};
use crate::model::{FeatureVector, Label, LabeledFeatures, FEATURE_COUNT, FEATURE_NAMES};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestParams {
    pub n_trees: usize,
    /// `None` grows trees until leaves are pure or too small to split.
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub min_samples_leaf: usize,
    /// Features searched per node; `None` means `ceil(sqrt(6)) = 3`.
    pub max_features: Option<usize>,
    /// Draw each tree's training rows with replacement (same size as the
    /// training set). When off, every tree sees every row once.
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 100,
            max_depth: None,
            min_samples_split: 2,
            min_samples_leaf: 1,
            max_features: None,
            bootstrap: true,
            seed: crate::DEFAULT_SEED,
        }
    }
}

impl ForestParams {
    pub fn effective_max_features(&self) -> usize {
        self.max_features
            .unwrap_or_else(|| (FEATURE_COUNT as f64).sqrt().ceil() as usize)
            .clamp(1, FEATURE_COUNT)
    }

    fn tree_params(&self) -> TreeParams {
        TreeParams {
            max_depth: self.max_depth,
            min_samples_split: self.min_samples_split,
            min_samples_leaf: self.min_samples_leaf,
            max_features: self.effective_max_features(),
        }
    }
}

/// A trained forest plus what is needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub params: ForestParams,
    pub seed: u64,
    pub n_trees: usize,
    pub feature_names: Vec<String>,
    /// Mean decrease in impurity, normalized to sum to 1.
    pub importances: Vec<f64>,
    /// No tree has a split, so `importances` is uniform by convention.
    pub importances_degenerate: bool,
    /// Set when the training data held only one class.
    pub single_class: Option<Label>,
    pub training_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub training_corpus_hash: Option<String>,
    pub trees: Vec<DecisionTree>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub label: Label,
    /// Fraction of trees voting for `label`.
    pub confidence: f64,
    pub votes: [usize; 2],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Importances {
    pub values: [f64; FEATURE_COUNT],
    pub degenerate: bool,
}

fn tree_rng(seed: u64, tree_index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(tree_index as u64);
    rng
}

/// Trains a random forest. Each tree draws from its own stream
/// `(seed, tree index)`, so training is reproducible regardless of thread
/// count.
pub fn train_forest(train: &[LabeledFeatures], params: &ForestParams) -> Result<ForestModel> {
    if train.is_empty() {
        return Err(MetaqaError::Training("training set is empty".to_owned()));
    }
    if params.n_trees == 0 {
        return Err(MetaqaError::Training(
            "forest needs at least one tree".to_owned(),
        ));
    }
    if let Some(row) = train
        .iter()
        .find(|r| r.features.0.iter().any(|v| !v.is_finite()))
    {
        return Err(MetaqaError::Training(format!(
            "record `{}` has a non-finite feature",
            row.url
        )));
    }
    let rows: Vec<FeatureVector> = train.iter().map(|r| r.features).collect();
    let labels: Vec<Label> = train.iter().map(|r| r.label).collect();
    let single_class = if labels.iter().all(|l| *l == labels[0]) {
        log::warn!("training data holds only `{}` records", labels[0]);
        Some(labels[0])
    } else {
        None
    };

    let n = rows.len();
    let tree_params = params.tree_params();
    let trees: Vec<DecisionTree> = (0..params.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = tree_rng(params.seed, t);
            let sample: Vec<usize> = if params.bootstrap {
                (0..n).map(|_| rng.random_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            DecisionTree::fit(&rows, &labels, sample, &tree_params, &mut rng)
        })
        .collect();

    let imp = importances_of(&trees);
    Ok(ForestModel {
        params: *params,
        seed: params.seed,
        n_trees: params.n_trees,
        feature_names: FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
        importances: imp.values.to_vec(),
        importances_degenerate: imp.degenerate,
        single_class,
        training_size: n,
        training_corpus_hash: None,
        trees,
    })
}

/// Per-tree impurity decreases normalized to 1, averaged over the trees
/// that split at all, normalized again. Uniform and flagged when no tree
/// splits.
fn importances_of(trees: &[DecisionTree]) -> Importances {
    let mut sum = [0.0; FEATURE_COUNT];
    let mut contributing = 0usize;
    for tree in trees {
        let dec = tree.impurity_decrease();
        let total: f64 = dec.iter().sum();
        if total > 0.0 {
            contributing += 1;
            for (s, d) in sum.iter_mut().zip(dec) {
                *s += d / total;
            }
        }
    }
    let total: f64 = sum.iter().sum();
    if contributing == 0 || total <= 0.0 {
        return Importances {
            values: [1.0 / FEATURE_COUNT as f64; FEATURE_COUNT],
            degenerate: true,
        };
    }
    Importances {
        values: sum.map(|s| s / total),
        degenerate: false,
    }
}

/// Feature importances recomputed from the model's trees.
pub fn feature_importances(model: &ForestModel) -> Importances {
    importances_of(&model.trees)
}

/// Majority vote over trees; an even vote goes to `WithoutControl`.
pub fn predict(model: &ForestModel, features: &[f64]) -> Result<Prediction> {
    if features.len() != FEATURE_COUNT {
        return Err(MetaqaError::InvalidInput(format!(
            "feature vector must have {FEATURE_COUNT} entries, got {}",
            features.len()
        )));
    }
    if model.trees.is_empty() {
        return Err(MetaqaError::InvalidInput("model has no trees".to_owned()));
    }
    let mut votes = [0usize; 2];
    for tree in &model.trees {
        votes[tree.predict(features).index()] += 1;
    }
    let label = if votes[0] > votes[1] {
        Label::WithControl
    } else {
        Label::WithoutControl
    };
    Ok(Prediction {
        label,
        confidence: votes[label.index()] as f64 / model.trees.len() as f64,
        votes,
    })
}

impl ForestModel {
    /// Structural checks applied to every loaded model.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(MetaqaError::InvalidInput(format!("model: {msg}")));
        if self.trees.is_empty() || self.trees.len() != self.n_trees {
            return bad(format!(
                "declares {} trees, holds {}",
                self.n_trees,
                self.trees.len()
            ));
        }
        if self.feature_names != FEATURE_NAMES {
            return bad(format!("unexpected feature names {:?}", self.feature_names));
        }
        for (i, tree) in self.trees.iter().enumerate() {
            if let Err(e) = tree.validate() {
                return bad(format!("tree {i}: {e}"));
            }
        }
        if self.importances.len() != FEATURE_COUNT
            || self.importances.iter().any(|v| v.is_nan() || *v < 0.0)
            || (self.importances.iter().sum::<f64>() - 1.0).abs() > 1e-9
        {
            return bad(format!(
                "importances {:?} are not a distribution",
                self.importances
            ));
        }
        Ok(())
    }
}
