//! Versioned on-disk artifacts.
//!
//! Profile and model files are pretty-printed JSON objects whose first key
//! is `format`. Report files are CSV whose first line is
//! `# metaqa-report/1 <kind>` (further `#` lines carry provenance), or
//! line-delimited JSON whose first line is a header object with `format`.
//! Readers reject any other version with [`MetaqaError::FormatVersion`].

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classifier::{ForestModel, Prediction};
use crate::error::{MetaqaError, Result};
use crate::ingest::write_oer_records;
use crate::model::{FeatureVector, Field, Label, LabeledFeatures, OerRecord, ScoreReport};
use crate::profiler::ProfileSet;

pub const PROFILE_FORMAT: &str = "metaqa-profile/1";
pub const MODEL_FORMAT: &str = "metaqa-model/1";
pub const REPORT_FORMAT: &str = "metaqa-report/1";
pub const FEATURES_FORMAT: &str = "metaqa-features/1";

/// Tool version plus the effective run configuration that produced an
/// artifact. Contains no timestamps, so identical runs write identical
/// bytes.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    #[serde(default)]
    pub config: BTreeMap<String, String>,
}

impl Provenance {
    pub fn new(config: BTreeMap<String, String>) -> Provenance {
        Provenance {
            tool: format!("metaqa {}", env!("CARGO_PKG_VERSION")),
            config,
        }
    }
}

/// Hex SHA-256 of the canonical line-delimited form of `records`.
pub fn corpus_hash(records: &[OerRecord]) -> String {
    let digest = Sha256::digest(write_oer_records(records).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| MetaqaError::io(parent, e))?;
    }
    std::fs::write(path, contents).map_err(|e| MetaqaError::io(path, e))
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| MetaqaError::io(path, e))
}

fn check_format(expected: &str, found: Option<&str>) -> Result<()> {
    match found {
        Some(f) if f == expected => Ok(()),
        other => Err(MetaqaError::FormatVersion {
            expected: expected.to_owned(),
            found: other.unwrap_or("<none>").to_owned(),
        }),
    }
}

#[derive(Serialize, Deserialize)]
struct ProfileFile {
    format: String,
    provenance: Provenance,
    profile_set: ProfileSet,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    provenance: Provenance,
    model: ForestModel,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("artifact serializes");
    text.push('\n');
    text
}

fn from_versioned_json<T: DeserializeOwned>(text: &str, expected: &str, what: &str) -> Result<T> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| MetaqaError::parse(what, e))?;
    check_format(expected, value.get("format").and_then(|f| f.as_str()))?;
    serde_json::from_value(value).map_err(|e| MetaqaError::parse(what, e))
}

pub fn write_profile(set: &ProfileSet, provenance: &Provenance) -> String {
    to_json(&ProfileFile {
        format: PROFILE_FORMAT.to_owned(),
        provenance: provenance.clone(),
        profile_set: set.clone(),
    })
}

pub fn read_profile(text: &str) -> Result<(ProfileSet, Provenance)> {
    let file: ProfileFile = from_versioned_json(text, PROFILE_FORMAT, "profile file")?;
    file.profile_set.validate()?;
    Ok((file.profile_set, file.provenance))
}

pub fn write_model(model: &ForestModel, provenance: &Provenance) -> String {
    to_json(&ModelFile {
        format: MODEL_FORMAT.to_owned(),
        provenance: provenance.clone(),
        model: model.clone(),
    })
}

/// Parses and validates a model file. Nothing is returned unless the whole
/// file is well formed.
pub fn read_model(text: &str) -> Result<(ForestModel, Provenance)> {
    let file: ModelFile = from_versioned_json(text, MODEL_FORMAT, "model file")?;
    file.model.validate()?;
    Ok((file.model, file.provenance))
}

/// Output encoding for report files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportEncoding {
    Csv,
    Jsonl,
}

/// Writer for CSV reports with the version header already in place.
pub(crate) struct CsvReport {
    writer: csv::Writer<Vec<u8>>,
}

impl CsvReport {
    pub(crate) fn new(kind: &str, provenance: Option<&Provenance>, header: &[&str]) -> CsvReport {
        let mut prefix = format!("# {REPORT_FORMAT} {kind}\n");
        if let Some(p) = provenance {
            prefix.push_str(&format!(
                "# provenance {}\n",
                serde_json::to_string(p).expect("provenance serializes")
            ));
        }
        let mut writer = csv::Writer::from_writer(prefix.into_bytes());
        writer.write_record(header).expect("in-memory write");
        CsvReport { writer }
    }

    pub(crate) fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).expect("in-memory write");
    }

    pub(crate) fn finish(self) -> String {
        let bytes = self.writer.into_inner().expect("in-memory flush");
        String::from_utf8(bytes).expect("reports are UTF-8")
    }
}

/// Splits a CSV report into its kind and a reader over the table.
fn open_csv_report<'a>(text: &'a str, kind: &str) -> Result<csv::Reader<&'a [u8]>> {
    let first = text.lines().next().unwrap_or("");
    let mut parts = first.strip_prefix("# ").unwrap_or("").split_whitespace();
    check_format(REPORT_FORMAT, parts.next())?;
    let found_kind = parts.next().unwrap_or("");
    if found_kind != kind {
        return Err(MetaqaError::parse(
            "report",
            format!("expected a `{kind}` report, found `{found_kind}`"),
        ));
    }
    Ok(csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes()))
}

fn parse_cell<T: std::str::FromStr>(record: &csv::StringRecord, i: usize, what: &str) -> Result<T> {
    record.get(i).and_then(|s| s.parse().ok()).ok_or_else(|| {
        MetaqaError::parse(
            "report",
            format!(
                "bad {what} in row {:?}",
                record.position().map(|p| p.line())
            ),
        )
    })
}

fn score_header() -> Vec<String> {
    let mut header = vec![
        "url".to_owned(),
        "avail_score".to_owned(),
        "norm_score".to_owned(),
    ];
    header.extend(Field::ALL.iter().map(|f| format!("rating_{f}")));
    header.extend(Field::ALL.iter().map(|f| format!("available_{f}")));
    header
}

pub fn write_score_report(
    reports: &[ScoreReport],
    provenance: &Provenance,
    encoding: ReportEncoding,
) -> String {
    match encoding {
        ReportEncoding::Csv => {
            let header = score_header();
            let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
            let mut out = CsvReport::new("scores", Some(provenance), &header_refs);
            for r in reports {
                let mut row = vec![
                    r.url.clone(),
                    r.avail_score.to_string(),
                    r.norm_score.to_string(),
                ];
                row.extend(Field::ALL.iter().map(|f| r.per_field_rating[f].to_string()));
                row.extend(
                    Field::ALL
                        .iter()
                        .map(|f| r.per_field_available[f].to_string()),
                );
                out.row(&row);
            }
            out.finish()
        }
        ReportEncoding::Jsonl => {
            let header = serde_json::json!({
                "format": REPORT_FORMAT,
                "kind": "scores",
                "provenance": provenance,
            });
            let mut out = serde_json::to_string(&header).expect("header serializes");
            out.push('\n');
            for r in reports {
                out.push_str(&serde_json::to_string(r).expect("report serializes"));
                out.push('\n');
            }
            out
        }
    }
}

/// Reads a score report in either encoding.
pub fn read_score_report(text: &str) -> Result<Vec<ScoreReport>> {
    if text.trim_start().starts_with('{') {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: serde_json::Value = serde_json::from_str(lines.next().unwrap_or(""))
            .map_err(|e| MetaqaError::parse("report header", e))?;
        check_format(REPORT_FORMAT, header.get("format").and_then(|f| f.as_str()))?;
        return lines
            .map(|l| serde_json::from_str(l).map_err(|e| MetaqaError::parse("score report", e)))
            .collect();
    }
    let mut reader = open_csv_report(text, "scores")?;
    let headers = reader
        .headers()
        .map_err(|e| MetaqaError::parse("score report", e))?
        .clone();
    if headers.iter().ne(score_header().iter().map(String::as_str)) {
        return Err(MetaqaError::parse("score report", "unexpected columns"));
    }
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| MetaqaError::parse("score report", e))?;
        let mut per_field_rating = BTreeMap::new();
        let mut per_field_available = BTreeMap::new();
        for (k, field) in Field::ALL.into_iter().enumerate() {
            per_field_rating.insert(field, parse_cell(&rec, 3 + k, "rating")?);
            per_field_available.insert(field, parse_cell(&rec, 10 + k, "availability")?);
        }
        out.push(ScoreReport {
            url: rec[0].to_owned(),
            avail_score: parse_cell(&rec, 1, "avail_score")?,
            norm_score: parse_cell(&rec, 2, "norm_score")?,
            per_field_rating,
            per_field_available,
        });
    }
    Ok(out)
}

/// One classified record.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRow {
    pub url: String,
    pub label: Label,
    pub confidence: f64,
    pub votes: [usize; 2],
}

impl PredictionRow {
    pub fn new(url: impl Into<String>, p: &Prediction) -> PredictionRow {
        PredictionRow {
            url: url.into(),
            label: p.label,
            confidence: p.confidence,
            votes: p.votes,
        }
    }
}

const PREDICTION_HEADER: [&str; 5] = [
    "url",
    "label",
    "confidence",
    "votes_with_control",
    "votes_without_control",
];

pub fn write_predictions(rows: &[PredictionRow], provenance: &Provenance) -> String {
    let mut out = CsvReport::new("predictions", Some(provenance), &PREDICTION_HEADER);
    for r in rows {
        out.row([
            r.url.clone(),
            r.label.to_string(),
            r.confidence.to_string(),
            r.votes[0].to_string(),
            r.votes[1].to_string(),
        ]);
    }
    out.finish()
}

fn parse_label(s: &str) -> Option<Label> {
    Label::ALL.into_iter().find(|l| l.as_str() == s)
}

pub fn read_predictions(text: &str) -> Result<Vec<PredictionRow>> {
    let mut reader = open_csv_report(text, "predictions")?;
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| MetaqaError::parse("predictions", e))?;
        out.push(PredictionRow {
            url: rec.get(0).unwrap_or_default().to_owned(),
            label: rec
                .get(1)
                .and_then(parse_label)
                .ok_or_else(|| MetaqaError::parse("predictions", "bad label"))?,
            confidence: parse_cell(&rec, 2, "confidence")?,
            votes: [parse_cell(&rec, 3, "votes")?, parse_cell(&rec, 4, "votes")?],
        });
    }
    Ok(out)
}

/// Feature table: `# metaqa-features/1` then CSV with url, label and the
/// six features.
pub fn write_feature_table(rows: &[LabeledFeatures]) -> String {
    let mut writer = csv::Writer::from_writer(format!("# {FEATURES_FORMAT}\n").into_bytes());
    let mut header = vec!["url", "label"];
    header.extend(crate::model::FEATURE_NAMES);
    writer.write_record(&header).expect("in-memory write");
    for r in rows {
        let mut row = vec![r.url.clone(), r.label.to_string()];
        row.extend(r.features.0.iter().map(f64::to_string));
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("flush")).expect("UTF-8")
}

pub fn read_feature_table(text: &str) -> Result<Vec<LabeledFeatures>> {
    let first = text.lines().next().unwrap_or("");
    check_format(FEATURES_FORMAT, first.strip_prefix("# ").map(str::trim))?;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| MetaqaError::parse("feature table", e))?;
        let values = (0..6)
            .map(|k| parse_cell::<f64>(&rec, 2 + k, "feature"))
            .collect::<Result<Vec<_>>>()?;
        out.push(LabeledFeatures {
            url: rec.get(0).unwrap_or_default().to_owned(),
            label: rec
                .get(1)
                .and_then(parse_label)
                .ok_or_else(|| MetaqaError::parse("feature table", "bad label"))?,
            features: FeatureVector::try_from(values.as_slice())?,
        });
    }
    Ok(out)
}
