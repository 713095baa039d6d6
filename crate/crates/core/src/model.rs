//! Domain types shared by every stage of the pipeline.
//!
//! Nothing in here touches the filesystem or computes statistics. Records are
//! plain data; [`OerRecord::canonicalize`] is the one place where the
//! "absent" representation of a field is decided.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

/// The seven metadata fields that carry an importance rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Title,
    Description,
    Subjects,
    Level,
    Language,
    TimeRequired,
    Accessibilities,
}

impl Field {
    pub const ALL: [Field; 7] = [
        Field::Title,
        Field::Description,
        Field::Subjects,
        Field::Level,
        Field::Language,
        Field::TimeRequired,
        Field::Accessibilities,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Field::Title => "title",
            Field::Description => "description",
            Field::Subjects => "subjects",
            Field::Level => "level",
            Field::Language => "language",
            Field::TimeRequired => "time_required",
            Field::Accessibilities => "accessibilities",
        }
    }

    /// Fields rated by distance from a fitted length distribution rather
    /// than by presence alone.
    pub fn is_length_valued(self) -> bool {
        matches!(self, Field::Title | Field::Description | Field::Subjects)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Field {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Field::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| format!("unknown field `{s}`"))
    }
}

/// Manual quality-control status as recorded by the source repository.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum QualityControl {
    WithControl,
    WithoutControl,
    #[default]
    Unknown,
}

impl QualityControl {
    pub fn label(self) -> Option<Label> {
        match self {
            QualityControl::WithControl => Some(Label::WithControl),
            QualityControl::WithoutControl => Some(Label::WithoutControl),
            QualityControl::Unknown => None,
        }
    }

    fn is_unknown(&self) -> bool {
        matches!(self, QualityControl::Unknown)
    }
}

/// Binary class used by the classifier. Index 0 is the higher-quality class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    WithControl,
    WithoutControl,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::WithControl, Label::WithoutControl];

    pub fn index(self) -> usize {
        match self {
            Label::WithControl => 0,
            Label::WithoutControl => 1,
        }
    }

    pub fn from_index(index: usize) -> Label {
        if index == 0 {
            Label::WithControl
        } else {
            Label::WithoutControl
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::WithControl => "with_control",
            Label::WithoutControl => "without_control",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl From<Label> for QualityControl {
    fn from(label: Label) -> Self {
        match label {
            Label::WithControl => QualityControl::WithControl,
            Label::WithoutControl => QualityControl::WithoutControl,
        }
    }
}

/// Metadata of one open educational resource.
///
/// Absent scalars are `None`, absent lists are empty. Records built by hand
/// should go through [`OerRecord::canonicalize`] so that `Some("")` and
/// `vec![""]` collapse to the absent state.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct OerRecord {
    pub url: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub educational_type: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub date_available: Option<NaiveDate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub date_issued: Option<NaiveDate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subjects: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_required: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub accessibilities: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub languages: Vec<String>,
    #[serde(default, skip_serializing_if = "QualityControl::is_unknown")]
    pub quality_control: QualityControl,
}

fn canonical_scalar(value: Option<String>) -> Option<String> {
    value.and_then(|v| {
        let trimmed = v.trim();
        if trimmed.is_empty() {
            None
        } else if trimmed.len() == v.len() {
            Some(v)
        } else {
            Some(trimmed.to_owned())
        }
    })
}

fn canonical_list(values: Vec<String>) -> Vec<String> {
    values
        .into_iter()
        .filter_map(|v| canonical_scalar(Some(v)))
        .collect()
}

impl OerRecord {
    pub fn new(url: impl Into<String>) -> Self {
        OerRecord {
            url: url.into(),
            ..Default::default()
        }
    }

    /// Trims every text value and maps empty strings and empty list entries
    /// to the absent state. Idempotent.
    pub fn canonicalize(self) -> Self {
        OerRecord {
            url: self.url.trim().to_owned(),
            title: canonical_scalar(self.title),
            description: canonical_scalar(self.description),
            educational_type: canonical_scalar(self.educational_type),
            date_available: self.date_available,
            date_issued: self.date_issued,
            subjects: canonical_list(self.subjects),
            level: canonical_scalar(self.level),
            time_required: canonical_scalar(self.time_required),
            accessibilities: canonical_list(self.accessibilities),
            languages: canonical_list(self.languages),
            quality_control: self.quality_control,
        }
    }

    pub fn is_available(&self, field: Field) -> bool {
        fn present(v: &Option<String>) -> bool {
            v.as_deref().is_some_and(|s| !s.trim().is_empty())
        }
        match field {
            Field::Title => present(&self.title),
            Field::Description => present(&self.description),
            Field::Subjects => subject_count(&self.subjects) > 0,
            Field::Level => present(&self.level),
            Field::Language => subject_count(&self.languages) > 0,
            Field::TimeRequired => present(&self.time_required),
            Field::Accessibilities => subject_count(&self.accessibilities) > 0,
        }
    }

    /// Length of a length-valued field, or `None` when the field is absent
    /// or is not length-valued.
    pub fn field_length(&self, field: Field) -> Option<usize> {
        if !self.is_available(field) {
            return None;
        }
        match field {
            Field::Title => Some(word_count(self.title.as_deref())),
            Field::Description => Some(word_count(self.description.as_deref())),
            Field::Subjects => Some(subject_count(&self.subjects)),
            _ => None,
        }
    }

    /// Calendar year used for time series: availability date, falling back
    /// to the issue date.
    pub fn year(&self) -> Option<i32> {
        use chrono::Datelike;
        self.date_available.or(self.date_issued).map(|d| d.year())
    }
}

/// Metadata of one video, as harvested from a video platform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VideoRecord {
    pub url: String,
    pub title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub dislikes: u64,
    pub length_seconds: u64,
    pub likes: u64,
    pub rating: f64,
    #[serde(default)]
    pub subjects: Vec<String>,
    pub views: u64,
}

/// Rating function attached to a field profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RatingFn {
    /// Inverse ceiled z-distance from a fitted normal. `degenerate` marks a
    /// zero-scale fit.
    NormalFit {
        mean: f64,
        scale: f64,
        #[serde(default)]
        degenerate: bool,
    },
    /// 1 when the field is present, 0 otherwise.
    Boolean,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldProfile {
    pub field: Field,
    pub importance_rate: f64,
    pub normalized_importance_rate: f64,
    pub rating_fn: RatingFn,
}

/// Per-record output of the two scoring models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub url: String,
    pub avail_score: f64,
    pub norm_score: f64,
    pub per_field_rating: BTreeMap<Field, f64>,
    pub per_field_available: BTreeMap<Field, bool>,
}

pub const FEATURE_COUNT: usize = 6;

/// Column names of the classifier feature vector, in vector order.
pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "avail_score",
    "norm_score",
    "level_available",
    "description_word_count",
    "title_word_count",
    "subject_count",
];

/// Classifier input: `[avail_score, norm_score, level_available,
/// description_word_count, title_word_count, subject_count]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(pub [f64; FEATURE_COUNT]);

impl FeatureVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<&[f64]> for FeatureVector {
    type Error = crate::MetaqaError;

    fn try_from(values: &[f64]) -> Result<Self, Self::Error> {
        let array: [f64; FEATURE_COUNT] = values.try_into().map_err(|_| {
            crate::MetaqaError::InvalidInput(format!(
                "feature vector must have {FEATURE_COUNT} entries, got {}",
                values.len()
            ))
        })?;
        Ok(FeatureVector(array))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledFeatures {
    pub url: String,
    pub features: FeatureVector,
    pub label: Label,
}

/// Number of whitespace-separated tokens. Punctuation is kept as part of
/// tokens.
pub fn word_count(text: Option<&str>) -> usize {
    text.map_or(0, |t| t.split_whitespace().count())
}

/// Number of subject entries that are non-empty after trimming. Duplicates
/// count separately.
pub fn subject_count(subjects: &[String]) -> usize {
    subjects.iter().filter(|s| !s.trim().is_empty()).count()
}
