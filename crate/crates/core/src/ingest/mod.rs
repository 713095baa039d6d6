//! Corpus ingestion: raw CSV / line-delimited JSON files into canonical
//! records.
//!
//! # CSV header contract
//!
//! OER files use these column names (case-insensitive, spaces and hyphens
//! read as underscores; unknown columns are ignored, missing columns read
//! as absent):
//!
//! `url, title, description, educational_type, date_available, date_issued,
//! subjects, level, time_required, accessibilities, languages, quality_control`
//!
//! Video files use:
//!
//! `url, title, description, dislikes, length_seconds, likes, rating,
//! subjects, views`
//!
//! Multi-valued cells (`subjects`, `accessibilities`, `languages`) are
//! separated by `|`. Dates are ISO-8601 (`YYYY-MM-DD`, a trailing time part
//! is ignored); `MM/DD/YYYY` is also read.
//!
//! Line-delimited files carry one JSON object per line with the same field
//! names; an absent field is simply omitted and list fields are arrays.

mod mapping;
mod oer;
mod video;

use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{MetaqaError, Result};

pub use mapping::{video_to_oer, MappingRules, DEFAULT_LEVEL_KEYWORDS};
pub use oer::{parse_oer_corpus, parse_oer_reader, write_oer_records};
pub use video::{parse_video_corpus, parse_video_reader, write_video_records};

/// Separator for multi-valued CSV cells.
pub const LIST_DELIMITER: char = '|';

/// Fraction of malformed rows above which an OER corpus is rejected.
pub const MAX_MALFORMED_FRACTION: f64 = 0.10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    Csv,
    Jsonl,
}

impl CorpusFormat {
    /// Guess from a file extension; `.jsonl`, `.ndjson` and `.json` are
    /// line-delimited, everything else is CSV.
    pub fn from_path(path: &Path) -> CorpusFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl" | "ndjson" | "json") => CorpusFormat::Jsonl,
            _ => CorpusFormat::Csv,
        }
    }
}

impl FromStr for CorpusFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(CorpusFormat::Csv),
            "jsonl" | "ndjson" => Ok(CorpusFormat::Jsonl),
            other => Err(format!(
                "unknown corpus format `{other}` (expected csv or jsonl)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CorpusSource {
    SkillsCommons,
    VideoPlatform,
    Generic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub source: CorpusSource,
    pub record_count: usize,
    /// Record fields holding a non-absent value in at least one record,
    /// in schema order.
    pub fields_present: Vec<String>,
    pub input_rows: usize,
    pub rejected_rows: usize,
}

/// A row that was skipped, with its 1-based line number in the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowIssue {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct ParseOutcome<T> {
    pub records: Vec<T>,
    pub manifest: CorpusManifest,
    pub issues: Vec<RowIssue>,
}

impl<T> ParseOutcome<T> {
    pub fn warning_count(&self) -> usize {
        self.issues.len()
    }
}

/// Header names are matched after lower-casing and mapping spaces and
/// hyphens to underscores.
pub(crate) fn normalize_header(name: &str) -> String {
    name.trim()
        .trim_start_matches('\u{feff}')
        .to_ascii_lowercase()
        .chars()
        .map(|c| if c == ' ' || c == '-' { '_' } else { c })
        .collect()
}

pub(crate) fn split_list(cell: &str) -> Vec<String> {
    cell.split(LIST_DELIMITER)
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
        .collect()
}

/// Flattens a JSON value into the cell string a CSV row would have held.
pub(crate) fn json_cell(value: &serde_json::Value) -> Option<String> {
    use serde_json::Value;
    match value {
        Value::Null => None,
        Value::String(s) => Some(s.clone()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::Array(items) => Some(
            items
                .iter()
                .filter_map(json_cell)
                .collect::<Vec<_>>()
                .join(&LIST_DELIMITER.to_string()),
        ),
        Value::Object(_) => Some(value.to_string()),
    }
}

pub(crate) fn json_list(value: &serde_json::Value) -> Vec<String> {
    match value {
        serde_json::Value::Array(items) => items
            .iter()
            .filter_map(json_cell)
            .map(|s| s.trim().to_owned())
            .filter(|s| !s.is_empty())
            .collect(),
        other => json_cell(other).map(|s| split_list(&s)).unwrap_or_default(),
    }
}

pub(crate) fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| MetaqaError::io(path, e))
}

pub(crate) fn check_malformed(outcome_rows: usize, rejected: usize) -> Result<()> {
    if outcome_rows > 0 && rejected as f64 > MAX_MALFORMED_FRACTION * outcome_rows as f64 {
        return Err(MetaqaError::Corpus(format!(
            "{rejected} of {outcome_rows} rows are malformed (limit is {:.0}%)",
            MAX_MALFORMED_FRACTION * 100.0
        )));
    }
    Ok(())
}
