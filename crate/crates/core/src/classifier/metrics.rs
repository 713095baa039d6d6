use serde::{Deserialize, Serialize};

use super::forest::{predict, ForestModel};
use crate::error::{MetaqaError, Result};
use crate::model::{Label, LabeledFeatures};

/// Held-out classification quality.
///
/// `confusion[actual][predicted]`, indexed by [`Label::index`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub f1_with_control: f64,
    pub f1_without_control: f64,
    pub confusion: [[u64; 2]; 2],
}

impl Metrics {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Label, Label)>) -> Metrics {
        let mut confusion = [[0u64; 2]; 2];
        for (actual, predicted) in pairs {
            confusion[actual.index()][predicted.index()] += 1;
        }
        let total: u64 = confusion.iter().flatten().sum();
        let correct = confusion[0][0] + confusion[1][1];
        let accuracy = if total == 0 {
            0.0
        } else {
            correct as f64 / total as f64
        };
        Metrics {
            accuracy,
            f1_with_control: f1(&confusion, 0),
            f1_without_control: f1(&confusion, 1),
            confusion,
        }
    }

    pub fn test_size(&self) -> u64 {
        self.confusion.iter().flatten().sum()
    }
}

/// F1 of one class. A class that never occurs and is never predicted
/// scores 1.
fn f1(confusion: &[[u64; 2]; 2], class: usize) -> f64 {
    let other = 1 - class;
    let tp = confusion[class][class] as f64;
    let fp = confusion[other][class] as f64;
    let fn_ = confusion[class][other] as f64;
    if tp + fp + fn_ == 0.0 {
        return 1.0;
    }
    2.0 * tp / (2.0 * tp + fp + fn_)
}

pub fn evaluate(model: &ForestModel, test: &[LabeledFeatures]) -> Result<Metrics> {
    if test.is_empty() {
        return Err(MetaqaError::InvalidInput("test set is empty".to_owned()));
    }
    let pairs = test
        .iter()
        .map(|row| Ok((row.label, predict(model, row.features.as_slice())?.label)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Metrics::from_pairs(pairs))
}
