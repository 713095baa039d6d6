use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{MetaqaError, Result};
use crate::model::{Label, LabeledFeatures};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub stratified: bool,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: 0.8,
            stratified: true,
            seed: crate::DEFAULT_SEED,
        }
    }
}

/// Train/test partition, deterministic in `spec.seed`.
///
/// Stratified splits shuffle each class separately and send
/// `round(n_class * train_fraction)` of it to training, keeping at least
/// one record of each class on both sides. Both halves keep the input
/// order.
pub fn split(
    data: &[LabeledFeatures],
    spec: &SplitSpec,
) -> Result<(Vec<LabeledFeatures>, Vec<LabeledFeatures>)> {
    if !(spec.train_fraction > 0.0 && spec.train_fraction < 1.0) {
        return Err(MetaqaError::InvalidInput(format!(
            "train fraction must be in (0, 1), got {}",
            spec.train_fraction
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut in_train = vec![false; data.len()];

    if spec.stratified {
        for label in Label::ALL {
            let mut members: Vec<usize> = (0..data.len())
                .filter(|&i| data[i].label == label)
                .collect();
            if members.len() < 2 {
                return Err(MetaqaError::InvalidInput(format!(
                    "stratified split needs at least 2 `{label}` records, found {}",
                    members.len()
                )));
            }
            let n = members.len();
            let take = ((n as f64 * spec.train_fraction).round() as usize).clamp(1, n - 1);
            members.shuffle(&mut rng);
            for &i in &members[..take] {
                in_train[i] = true;
            }
        }
    } else {
        if data.len() < 2 {
            return Err(MetaqaError::InvalidInput(
                "split needs at least 2 records".to_owned(),
            ));
        }
        let n = data.len();
        let take = ((n as f64 * spec.train_fraction).round() as usize).clamp(1, n - 1);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        for &i in &order[..take] {
            in_train[i] = true;
        }
    }

    let mut train = Vec::new();
    let mut test = Vec::new();
    for (row, keep) in data.iter().zip(in_train) {
        if keep {
            train.push(row.clone());
        } else {
            test.push(row.clone());
        }
    }
    Ok((train, test))
}
