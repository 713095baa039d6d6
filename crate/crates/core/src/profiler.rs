//! Field benchmarks derived from the quality-controlled part of a corpus.
//!
//! A field's importance rate is how often it is filled in among controlled
//! resources; the normalized rates become the weights of both scoring
//! models. Title, description and subjects additionally get a normal fit of
//! their lengths, which the normal model rates against.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{MetaqaError, Result};
use crate::model::{Field, FieldProfile, OerRecord, QualityControl, RatingFn};
use crate::stats;

/// Tolerance on the sum of normalized rates for fitted profile sets.
pub const FITTED_SUM_TOLERANCE: f64 = 1e-9;
/// Tolerance for the canned set, whose weights are rounded.
pub const CANNED_SUM_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileOrigin {
    /// Fitted from a corpus at full precision.
    Fitted,
    /// Shipped reference constants, rounded.
    Canned,
}

/// One profile per field, in [`Field::ALL`] order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSet {
    pub origin: ProfileOrigin,
    pub profiles: Vec<FieldProfile>,
    pub source_corpus_size: usize,
    pub controlled_subset_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corpus_hash: Option<String>,
}

/// Result of [`fit_normal`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalFit {
    pub mean: f64,
    pub scale: f64,
    pub degenerate: bool,
}

impl ProfileSet {
    /// The reference benchmark constants, usable without a corpus.
    pub fn canned() -> ProfileSet {
        let normal = |mean, scale| RatingFn::NormalFit {
            mean,
            scale,
            degenerate: false,
        };
        let rows = [
            (Field::Title, 1.0, 0.17, normal(5.5, 2.5)),
            (Field::Description, 1.0, 0.17, normal(54.5, 40.0)),
            (Field::Subjects, 0.86, 0.145, normal(4.5, 3.5)),
            (Field::Level, 0.98, 0.165, RatingFn::Boolean),
            (Field::Language, 0.92, 0.155, RatingFn::Boolean),
            (Field::TimeRequired, 0.58, 0.098, RatingFn::Boolean),
            (Field::Accessibilities, 0.59, 0.099, RatingFn::Boolean),
        ];
        ProfileSet {
            origin: ProfileOrigin::Canned,
            profiles: rows
                .into_iter()
                .map(|(field, rate, norm, rating_fn)| FieldProfile {
                    field,
                    importance_rate: rate,
                    normalized_importance_rate: norm,
                    rating_fn,
                })
                .collect(),
            source_corpus_size: 0,
            controlled_subset_size: 0,
            corpus_hash: None,
        }
    }

    pub fn get(&self, field: Field) -> &FieldProfile {
        // validate() guarantees one profile per field in ALL order
        &self.profiles[Field::ALL.iter().position(|f| *f == field).unwrap()]
    }

    pub fn weight(&self, field: Field) -> f64 {
        self.get(field).normalized_importance_rate
    }

    pub fn weight_sum(&self) -> f64 {
        self.profiles
            .iter()
            .map(|p| p.normalized_importance_rate)
            .sum()
    }

    /// Checks the structural invariants: exactly one profile per field in
    /// canonical order, rates in [0, 1], the right rating kind per field,
    /// positive scales on non-degenerate fits, and the weight sum.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(MetaqaError::InvalidInput(format!("profile set: {msg}")));
        if self.profiles.len() != Field::ALL.len() {
            return bad(format!(
                "expected 7 field profiles, found {}",
                self.profiles.len()
            ));
        }
        for (profile, field) in self.profiles.iter().zip(Field::ALL) {
            if profile.field != field {
                return bad(format!(
                    "expected `{field}` profile, found `{}`",
                    profile.field
                ));
            }
            for (name, v) in [
                ("importance_rate", profile.importance_rate),
                (
                    "normalized_importance_rate",
                    profile.normalized_importance_rate,
                ),
            ] {
                if !(0.0..=1.0).contains(&v) {
                    return bad(format!("{field} {name} {v} outside [0, 1]"));
                }
            }
            match (profile.rating_fn, field.is_length_valued()) {
                (RatingFn::Boolean, false) => {}
                (
                    RatingFn::NormalFit {
                        mean,
                        scale,
                        degenerate,
                    },
                    true,
                ) => {
                    if !mean.is_finite() || !scale.is_finite() || scale < 0.0 {
                        return bad(format!("{field} has invalid fit ({mean}, {scale})"));
                    }
                    if (scale == 0.0) != degenerate {
                        return bad(format!(
                            "{field} degenerate flag disagrees with scale {scale}"
                        ));
                    }
                }
                (_, true) => return bad(format!("{field} needs a normal-fit rating function")),
                (_, false) => return bad(format!("{field} needs a boolean rating function")),
            }
        }
        let tolerance = match self.origin {
            ProfileOrigin::Fitted => FITTED_SUM_TOLERANCE,
            ProfileOrigin::Canned => CANNED_SUM_TOLERANCE,
        };
        let sum = self.weight_sum();
        if (sum - 1.0).abs() > tolerance {
            return bad(format!(
                "normalized rates sum to {sum}, not 1 within {tolerance}"
            ));
        }
        Ok(())
    }
}

/// Fraction of `records` in which each field is available.
///
/// Callers pass the quality-controlled subset.
pub fn compute_importance_rates(records: &[OerRecord]) -> Result<BTreeMap<Field, f64>> {
    if records.is_empty() {
        return Err(MetaqaError::Profiling(
            "no quality-controlled records to profile".to_owned(),
        ));
    }
    let n = records.len() as f64;
    Ok(Field::ALL
        .into_iter()
        .map(|field| {
            let available = records.iter().filter(|r| r.is_available(field)).count();
            (field, available as f64 / n)
        })
        .collect())
}

/// Divides every rate by the sum of all rates.
pub fn normalize_rates(rates: &BTreeMap<Field, f64>) -> Result<BTreeMap<Field, f64>> {
    if let Some((field, v)) = rates.iter().find(|(_, v)| !v.is_finite() || **v < 0.0) {
        return Err(MetaqaError::Profiling(format!(
            "importance rate of {field} is {v}; rates must be finite and non-negative"
        )));
    }
    let total: f64 = rates.values().sum();
    if total <= 0.0 {
        return Err(MetaqaError::Profiling(
            "all importance rates are zero; cannot normalize".to_owned(),
        ));
    }
    Ok(rates.iter().map(|(f, v)| (*f, v / total)).collect())
}

/// Sample mean and standard deviation (n-1) of field lengths.
pub fn fit_normal(samples: &[usize]) -> Result<NormalFit> {
    if samples.len() < 2 {
        return Err(MetaqaError::Profiling(format!(
            "normal fit needs at least 2 samples, got {}",
            samples.len()
        )));
    }
    let values: Vec<f64> = samples.iter().map(|&s| s as f64).collect();
    let mean = stats::mean(&values).expect("non-empty");
    let scale = stats::sample_std(&values).expect("two or more samples");
    Ok(NormalFit {
        mean,
        scale,
        degenerate: scale == 0.0,
    })
}

/// Fits all seven profiles on the `WithControl` records of `records`.
pub fn build_profile_set(records: &[OerRecord]) -> Result<ProfileSet> {
    let controlled: Vec<&OerRecord> = records
        .iter()
        .filter(|r| r.quality_control == QualityControl::WithControl)
        .collect();
    if controlled.is_empty() {
        return Err(MetaqaError::Profiling(
            "corpus has no quality-controlled (WithControl) records".to_owned(),
        ));
    }
    let owned: Vec<OerRecord> = controlled.iter().map(|r| (*r).clone()).collect();
    let rates = compute_importance_rates(&owned)?;
    let normalized = normalize_rates(&rates)?;

    let mut profiles = Vec::with_capacity(Field::ALL.len());
    for field in Field::ALL {
        let rating_fn = if field.is_length_valued() {
            let lengths: Vec<usize> = controlled
                .iter()
                .filter_map(|r| r.field_length(field))
                .collect();
            let fit = fit_normal(&lengths)
                .map_err(|e| MetaqaError::Profiling(format!("fitting {field} lengths: {e}")))?;
            if fit.degenerate {
                log::warn!(
                    "{field} lengths are constant ({}); profile is degenerate",
                    fit.mean
                );
            }
            RatingFn::NormalFit {
                mean: fit.mean,
                scale: fit.scale,
                degenerate: fit.degenerate,
            }
        } else {
            RatingFn::Boolean
        };
        profiles.push(FieldProfile {
            field,
            importance_rate: rates[&field],
            normalized_importance_rate: normalized[&field],
            rating_fn,
        });
    }

    let set = ProfileSet {
        origin: ProfileOrigin::Fitted,
        profiles,
        source_corpus_size: records.len(),
        controlled_subset_size: controlled.len(),
        corpus_hash: Some(crate::artifacts::corpus_hash(records)),
    };
    set.validate()
        .map_err(|e| MetaqaError::Invariant(format!("fitted profile set: {e}")))?;
    Ok(set)
}
