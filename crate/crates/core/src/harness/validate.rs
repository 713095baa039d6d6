//! Per-subject comparison of video ratings between the two predicted
//! groups. A positive difference means videos predicted `WithControl`
//! are rated higher on average.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::artifacts::{CsvReport, Provenance};
use crate::classifier::{extract_features, predict, ForestModel, Prediction};
use crate::error::{MetaqaError, Result};
use crate::ingest::{video_to_oer, MappingRules};
use crate::model::{Label, VideoRecord};
use crate::profiler::ProfileSet;
use crate::stats::{mean, sample_std};

/// A video with its predicted label.
#[derive(Debug, Clone, PartialEq)]
pub struct VideoPrediction {
    pub url: String,
    pub subjects: Vec<String>,
    pub rating: f64,
    pub prediction: Prediction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubjectRow {
    pub subject: String,
    pub n_with_control: usize,
    pub n_without_control: usize,
    pub mean_rating_with_control: Option<f64>,
    pub mean_rating_without_control: Option<f64>,
    /// `None` when either group is empty.
    pub rating_difference: Option<f64>,
}

impl SubjectRow {
    /// `+`, `-` or `0`; empty when the difference is undefined.
    pub fn sign(&self) -> &'static str {
        match self.rating_difference {
            Some(d) if d > 0.0 => "+",
            Some(d) if d < 0.0 => "-",
            Some(_) => "0",
            None => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationSummary {
    /// Mean difference over subjects where both groups are non-empty.
    pub average_difference: Option<f64>,
    pub comparable_subjects: usize,
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
    /// Subjects left out of the average because a group was empty.
    pub incomparable_subjects: Vec<String>,
    pub total_with_control: usize,
    pub total_without_control: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationOutcome {
    pub predictions: Vec<VideoPrediction>,
    pub rows: Vec<SubjectRow>,
    pub summary: ValidationSummary,
}

/// Sample standard deviation of a group's ratings.
pub fn rating_std(ratings: &[f64]) -> Result<f64> {
    sample_std(ratings).ok_or_else(|| {
        MetaqaError::InvalidInput(format!(
            "rating standard deviation needs at least 2 ratings, got {}",
            ratings.len()
        ))
    })
}

pub fn predict_videos(
    videos: &[VideoRecord],
    model: &ForestModel,
    profiles: &ProfileSet,
    rules: &MappingRules,
) -> Result<Vec<VideoPrediction>> {
    videos
        .iter()
        .map(|v| {
            let oer = video_to_oer(v, rules);
            let features = extract_features(&oer, profiles);
            Ok(VideoPrediction {
                url: v.url.clone(),
                subjects: v.subjects.clone(),
                rating: v.rating,
                prediction: predict(model, features.as_slice())?,
            })
        })
        .collect()
}

/// Groups predictions by subject. A video tagged with several subjects
/// counts once in each.
pub fn subject_rows(predictions: &[VideoPrediction]) -> (Vec<SubjectRow>, ValidationSummary) {
    let mut groups: BTreeMap<&str, [Vec<f64>; 2]> = BTreeMap::new();
    let mut totals = [0usize; 2];
    for p in predictions {
        let idx = p.prediction.label.index();
        totals[idx] += 1;
        for s in &p.subjects {
            groups.entry(s.as_str()).or_default()[idx].push(p.rating);
        }
    }

    let mut rows: Vec<SubjectRow> = groups
        .into_iter()
        .map(|(subject, [with, without])| {
            let mw = mean(&with);
            let mo = mean(&without);
            SubjectRow {
                subject: subject.to_owned(),
                n_with_control: with.len(),
                n_without_control: without.len(),
                mean_rating_with_control: mw,
                mean_rating_without_control: mo,
                rating_difference: mw.zip(mo).map(|(a, b)| a - b),
            }
        })
        .collect();
    rows.sort_by(|a, b| match (a.rating_difference, b.rating_difference) {
        (Some(x), Some(y)) => y.total_cmp(&x).then_with(|| a.subject.cmp(&b.subject)),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.subject.cmp(&b.subject),
    });

    let diffs: Vec<f64> = rows.iter().filter_map(|r| r.rating_difference).collect();
    let summary = ValidationSummary {
        average_difference: mean(&diffs),
        comparable_subjects: diffs.len(),
        positive: diffs.iter().filter(|d| **d > 0.0).count(),
        negative: diffs.iter().filter(|d| **d < 0.0).count(),
        zero: diffs.iter().filter(|d| **d == 0.0).count(),
        incomparable_subjects: rows
            .iter()
            .filter(|r| r.rating_difference.is_none())
            .map(|r| r.subject.clone())
            .collect(),
        total_with_control: totals[Label::WithControl.index()],
        total_without_control: totals[Label::WithoutControl.index()],
    };
    (rows, summary)
}

/// Predicts every video and compares mean ratings per subject.
pub fn validate_by_subject(
    videos: &[VideoRecord],
    model: &ForestModel,
    profiles: &ProfileSet,
    rules: &MappingRules,
) -> Result<ValidationOutcome> {
    if videos.is_empty() {
        return Err(MetaqaError::InvalidInput(
            "video corpus is empty".to_owned(),
        ));
    }
    let predictions = predict_videos(videos, model, profiles, rules)?;
    let (rows, summary) = subject_rows(&predictions);
    Ok(ValidationOutcome {
        predictions,
        rows,
        summary,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// CSV table of per-subject rows followed by an `Average` row.
pub fn validation_report(
    rows: &[SubjectRow],
    summary: &ValidationSummary,
    provenance: &Provenance,
) -> String {
    let mut report = CsvReport::new(
        "subject_validation",
        Some(provenance),
        &[
            "subject",
            "n_with_control",
            "n_without_control",
            "mean_rating_with_control",
            "mean_rating_without_control",
            "rating_difference",
            "sign",
        ],
    );
    for r in rows {
        report.row([
            r.subject.clone(),
            r.n_with_control.to_string(),
            r.n_without_control.to_string(),
            opt(r.mean_rating_with_control),
            opt(r.mean_rating_without_control),
            opt(r.rating_difference),
            r.sign().to_owned(),
        ]);
    }
    let avg_sign = match summary.average_difference {
        Some(d) if d > 0.0 => "+",
        Some(d) if d < 0.0 => "-",
        Some(_) => "0",
        None => "",
    };
    report.row([
        "Average".to_owned(),
        summary.total_with_control.to_string(),
        summary.total_without_control.to_string(),
        String::new(),
        String::new(),
        opt(summary.average_difference),
        avg_sign.to_owned(),
    ]);
    report.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pred(subject: &str, rating: f64, label: Label) -> VideoPrediction {
        VideoPrediction {
            url: format!("{subject}/{rating}"),
            subjects: vec![subject.to_owned()],
            rating,
            prediction: Prediction {
                label,
                confidence: 1.0,
                votes: if label == Label::WithControl {
                    [1, 0]
                } else {
                    [0, 1]
                },
            },
        }
    }

    #[test]
    fn single_subject_difference() {
        let (rows, summary) = subject_rows(&[
            pred("s", 0.8, Label::WithControl),
            pred("s", 0.7, Label::WithoutControl),
        ]);
        assert!((rows[0].rating_difference.unwrap() - 0.1).abs() < 1e-12);
        assert_eq!(rows[0].sign(), "+");
        assert_eq!(summary.positive, 1);
        assert!((summary.average_difference.unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn empty_group_is_excluded() {
        let (rows, summary) = subject_rows(&[
            pred("a", 4.0, Label::WithControl),
            pred("a", 3.0, Label::WithoutControl),
            pred("b", 4.5, Label::WithControl),
        ]);
        assert_eq!(summary.comparable_subjects, 1);
        assert_eq!(summary.incomparable_subjects, vec!["b".to_owned()]);
        assert_eq!(summary.average_difference, Some(1.0));
        assert_eq!(rows.last().unwrap().subject, "b");
        assert_eq!(rows.last().unwrap().sign(), "");
        assert_eq!(summary.total_with_control, 2);
    }

    #[test]
    fn rows_sorted_by_difference() {
        let (rows, summary) = subject_rows(&[
            pred("low", 3.0, Label::WithControl),
            pred("low", 4.0, Label::WithoutControl),
            pred("high", 5.0, Label::WithControl),
            pred("high", 3.0, Label::WithoutControl),
        ]);
        assert_eq!(rows[0].subject, "high");
        assert_eq!(rows[1].sign(), "-");
        assert_eq!((summary.positive, summary.negative), (1, 1));
        assert_eq!(summary.average_difference, Some(0.5));
    }

    #[test]
    fn std_of_two() {
        assert!((rating_std(&[0.5, 1.0]).unwrap() - 0.353_553_390_593_273_8).abs() < 1e-12);
        assert!(rating_std(&[1.0]).is_err());
        assert!(rating_std(&[]).is_err());
    }

    #[test]
    fn report_has_average_row() {
        let (rows, summary) = subject_rows(&[
            pred("s", 0.8, Label::WithControl),
            pred("s", 0.7, Label::WithoutControl),
        ]);
        let text = validation_report(&rows, &summary, &Provenance::default());
        assert!(text.starts_with("# metaqa-report/1 subject_validation\n"));
        assert!(text.lines().last().unwrap().starts_with("Average,1,1,,,"));
    }
}
