//! Exploratory reports: field availability by control group, the yearly
//! share of controlled resources, and length distributions of controlled
//! resources.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::artifacts::{CsvReport, Provenance};
use crate::model::{subject_count, word_count, Field, OerRecord, QualityControl};

/// Availability counts of one field split by control group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosstabRow {
    pub field: Field,
    pub with_control_available: usize,
    pub with_control_missing: usize,
    pub without_control_available: usize,
    pub without_control_missing: usize,
    /// Records with unknown control status; not part of the 2x2 table.
    pub unknown_control: usize,
}

impl CrosstabRow {
    pub fn total(&self) -> usize {
        self.with_control_available
            + self.with_control_missing
            + self.without_control_available
            + self.without_control_missing
            + self.unknown_control
    }
}

pub fn availability_crosstab(records: &[OerRecord]) -> Vec<CrosstabRow> {
    Field::ALL
        .into_iter()
        .map(|field| {
            let mut row = CrosstabRow {
                field,
                with_control_available: 0,
                with_control_missing: 0,
                without_control_available: 0,
                without_control_missing: 0,
                unknown_control: 0,
            };
            for r in records {
                let available = r.is_available(field);
                match (r.quality_control, available) {
                    (QualityControl::WithControl, true) => row.with_control_available += 1,
                    (QualityControl::WithControl, false) => row.with_control_missing += 1,
                    (QualityControl::WithoutControl, true) => row.without_control_available += 1,
                    (QualityControl::WithoutControl, false) => row.without_control_missing += 1,
                    (QualityControl::Unknown, _) => row.unknown_control += 1,
                }
            }
            row
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YearPoint {
    pub year: i32,
    pub with_control: usize,
    pub total: usize,
    pub proportion: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearlySeries {
    pub points: Vec<YearPoint>,
    /// Records with neither an availability nor an issue date.
    pub excluded: usize,
}

/// Share of `WithControl` records per calendar year of the availability
/// date (issue date when availability is missing).
pub fn yearly_control_proportion(records: &[OerRecord]) -> YearlySeries {
    let mut by_year: BTreeMap<i32, (usize, usize)> = BTreeMap::new();
    let mut excluded = 0;
    for r in records {
        match r.year() {
            Some(year) => {
                let entry = by_year.entry(year).or_default();
                entry.1 += 1;
                if r.quality_control == QualityControl::WithControl {
                    entry.0 += 1;
                }
            }
            None => excluded += 1,
        }
    }
    YearlySeries {
        points: by_year
            .into_iter()
            .map(|(year, (with_control, total))| YearPoint {
                year,
                with_control,
                total,
                proportion: with_control as f64 / total as f64,
            })
            .collect(),
        excluded,
    }
}

/// Counts per integer length.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Histogram(pub BTreeMap<usize, usize>);

impl Histogram {
    pub fn from_values(values: impl IntoIterator<Item = usize>) -> Histogram {
        let mut bins = BTreeMap::new();
        for v in values {
            *bins.entry(v).or_insert(0) += 1;
        }
        Histogram(bins)
    }

    pub fn count(&self) -> usize {
        self.0.values().sum()
    }

    pub fn mean(&self) -> Option<f64> {
        let n = self.count();
        (n > 0).then(|| self.0.iter().map(|(k, c)| (*k * *c) as f64).sum::<f64>() / n as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthHistograms {
    pub title: Histogram,
    pub description: Histogram,
    pub subjects: Histogram,
}

/// Length histograms over the `WithControl` records. Absent fields are
/// left out rather than counted as length 0.
pub fn length_histograms(records: &[OerRecord]) -> LengthHistograms {
    let controlled = || {
        records
            .iter()
            .filter(|r| r.quality_control == QualityControl::WithControl)
    };
    LengthHistograms {
        title: Histogram::from_values(
            controlled()
                .filter(|r| r.is_available(Field::Title))
                .map(|r| word_count(r.title.as_deref())),
        ),
        description: Histogram::from_values(
            controlled()
                .filter(|r| r.is_available(Field::Description))
                .map(|r| word_count(r.description.as_deref())),
        ),
        subjects: Histogram::from_values(
            controlled()
                .filter(|r| r.is_available(Field::Subjects))
                .map(|r| subject_count(&r.subjects)),
        ),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExploreReport {
    pub corpus_size: usize,
    pub crosstab: Vec<CrosstabRow>,
    pub yearly: YearlySeries,
    pub lengths: LengthHistograms,
}

pub fn explore(records: &[OerRecord]) -> ExploreReport {
    ExploreReport {
        corpus_size: records.len(),
        crosstab: availability_crosstab(records),
        yearly: yearly_control_proportion(records),
        lengths: length_histograms(records),
    }
}

impl ExploreReport {
    /// Named report files: one CSV per table plus a JSON summary.
    pub fn files(&self, provenance: &Provenance) -> Vec<(String, String)> {
        let mut crosstab = CsvReport::new(
            "availability",
            Some(provenance),
            &[
                "field",
                "with_control_available",
                "with_control_missing",
                "without_control_available",
                "without_control_missing",
                "unknown_control",
            ],
        );
        for row in &self.crosstab {
            crosstab.row([
                row.field.to_string(),
                row.with_control_available.to_string(),
                row.with_control_missing.to_string(),
                row.without_control_available.to_string(),
                row.without_control_missing.to_string(),
                row.unknown_control.to_string(),
            ]);
        }

        let mut yearly = CsvReport::new(
            "yearly_control",
            Some(provenance),
            &["year", "with_control", "total", "proportion"],
        );
        for p in &self.yearly.points {
            yearly.row([
                p.year.to_string(),
                p.with_control.to_string(),
                p.total.to_string(),
                p.proportion.to_string(),
            ]);
        }

        let mut lengths =
            CsvReport::new("lengths", Some(provenance), &["field", "length", "count"]);
        for (name, hist) in [
            ("title", &self.lengths.title),
            ("description", &self.lengths.description),
            ("subjects", &self.lengths.subjects),
        ] {
            for (len, count) in &hist.0 {
                lengths.row([name.to_owned(), len.to_string(), count.to_string()]);
            }
        }

        let summary = serde_json::json!({
            "format": crate::artifacts::REPORT_FORMAT,
            "kind": "explore_summary",
            "provenance": provenance,
            "corpus_size": self.corpus_size,
            "dated_records": self.corpus_size - self.yearly.excluded,
            "undated_records": self.yearly.excluded,
            "year_source": "date_available, falling back to date_issued",
            "controlled_length_means": {
                "title": self.lengths.title.mean(),
                "description": self.lengths.description.mean(),
                "subjects": self.lengths.subjects.mean(),
            },
        });
        let mut summary_text = serde_json::to_string_pretty(&summary).expect("summary serializes");
        summary_text.push('\n');

        vec![
            ("availability.csv".to_owned(), crosstab.finish()),
            ("yearly_control.csv".to_owned(), yearly.finish()),
            ("lengths.csv".to_owned(), lengths.finish()),
            ("summary.json".to_owned(), summary_text),
        ]
    }

    /// Bar-chart SVGs of the three length histograms.
    pub fn svg_files(&self) -> Vec<(String, String)> {
        [
            ("title", &self.lengths.title, "Title length (words)"),
            (
                "description",
                &self.lengths.description,
                "Description length (words)",
            ),
            ("subjects", &self.lengths.subjects, "Subject count"),
        ]
        .into_iter()
        .map(|(name, hist, caption)| {
            (
                format!("lengths_{name}.svg"),
                super::svg::histogram_svg(hist, caption),
            )
        })
        .collect()
    }
}
