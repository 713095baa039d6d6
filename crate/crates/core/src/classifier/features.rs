use crate::error::{MetaqaError, Result};
use crate::model::{subject_count, word_count, FeatureVector, Field, LabeledFeatures, OerRecord};
use crate::profiler::ProfileSet;
use crate::scoring::{availability_score, normal_score};

/// Feature vector of a record, in [`crate::model::FEATURE_NAMES`] order.
pub fn extract_features(record: &OerRecord, profiles: &ProfileSet) -> FeatureVector {
    FeatureVector([
        availability_score(record, profiles),
        normal_score(record, profiles),
        if record.is_available(Field::Level) {
            1.0
        } else {
            0.0
        },
        word_count(record.description.as_deref()) as f64,
        word_count(record.title.as_deref()) as f64,
        subject_count(&record.subjects) as f64,
    ])
}

/// Features plus the record's quality-control label. Records without a
/// known label cannot be used for training.
pub fn labeled_features(record: &OerRecord, profiles: &ProfileSet) -> Result<LabeledFeatures> {
    let label = record.quality_control.label().ok_or_else(|| {
        MetaqaError::Training(format!(
            "record `{}` has unknown quality control and cannot be used for training",
            record.url
        ))
    })?;
    Ok(LabeledFeatures {
        url: record.url.clone(),
        features: extract_features(record, profiles),
        label,
    })
}

/// Labeled features for every record; fails on the first unlabeled one.
pub fn feature_table(records: &[OerRecord], profiles: &ProfileSet) -> Result<Vec<LabeledFeatures>> {
    records
        .iter()
        .map(|r| labeled_features(r, profiles))
        .collect()
}
