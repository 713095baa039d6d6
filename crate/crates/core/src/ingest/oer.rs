use std::collections::{BTreeMap, HashSet};
use std::io::Read;
use std::path::Path;

use chrono::NaiveDate;
use serde_json::Value;

use super::{
    check_malformed, json_cell, json_list, normalize_header, read_file, split_list, CorpusFormat,
    CorpusManifest, CorpusSource, ParseOutcome, RowIssue,
};
use crate::error::{MetaqaError, Result};
use crate::model::{OerRecord, QualityControl};

/// Canonical column key for a normalized header name.
fn canonical_column(header: &str) -> Option<&'static str> {
    Some(match header {
        "url" | "link" | "uri" => "url",
        "title" => "title",
        "description" | "abstract" => "description",
        "educational_type" | "type" | "material_type" => "educational_type",
        "date_available" | "date_of_availability" | "available" => "date_available",
        "date_issued" | "date_of_issuing" | "issued" => "date_issued",
        "subjects" | "subject" | "subject_list" => "subjects",
        "level" | "audience_level" | "target_audience_level" | "target_audience" => "level",
        "time_required" | "time_required_to_finish" => "time_required",
        "accessibilities" | "accessibility" => "accessibilities",
        "languages" | "language" | "language_list" => "languages",
        "quality_control" | "qc" | "controlled" => "quality_control",
        _ => return None,
    })
}

pub(crate) fn parse_quality_control(
    raw: Option<&str>,
) -> std::result::Result<QualityControl, String> {
    let Some(raw) = raw else {
        return Ok(QualityControl::Unknown);
    };
    let key: String = raw
        .chars()
        .filter(|c| !matches!(c, ' ' | '_' | '-'))
        .flat_map(char::to_lowercase)
        .collect();
    match key.as_str() {
        "" | "unknown" | "na" | "n/a" => Ok(QualityControl::Unknown),
        "withcontrol" | "with" | "controlled" | "yes" | "y" | "true" | "1" => {
            Ok(QualityControl::WithControl)
        }
        "withoutcontrol" | "without" | "uncontrolled" | "no" | "n" | "false" | "0" => {
            Ok(QualityControl::WithoutControl)
        }
        _ => Err(format!("unrecognised quality_control value `{raw}`")),
    }
}

/// ISO date, optionally followed by a time part; `MM/DD/YYYY` as a fallback.
pub(crate) fn parse_date(raw: &str, line: usize, column: &str) -> Option<NaiveDate> {
    let raw = raw.trim();
    if raw.is_empty() {
        return None;
    }
    let head = raw.get(..10).unwrap_or(raw);
    let parsed = NaiveDate::parse_from_str(head, "%Y-%m-%d")
        .or_else(|_| NaiveDate::parse_from_str(raw, "%m/%d/%Y"));
    match parsed {
        Ok(d) => Some(d),
        Err(_) => {
            log::warn!("line {line}: unparseable {column} `{raw}`, treated as absent");
            None
        }
    }
}

fn build_record(
    line: usize,
    cell: impl Fn(&str) -> Option<String>,
    list: impl Fn(&str) -> Vec<String>,
) -> std::result::Result<OerRecord, String> {
    let url = cell("url").map(|u| u.trim().to_owned()).unwrap_or_default();
    if url.is_empty() {
        return Err("missing url".to_owned());
    }
    let quality_control = parse_quality_control(cell("quality_control").as_deref().map(str::trim))?;
    let date = |column: &str| cell(column).and_then(|raw| parse_date(&raw, line, column));
    let record = OerRecord {
        url,
        title: cell("title"),
        description: cell("description"),
        educational_type: cell("educational_type"),
        date_available: date("date_available"),
        date_issued: date("date_issued"),
        subjects: list("subjects"),
        level: cell("level"),
        time_required: cell("time_required"),
        accessibilities: list("accessibilities"),
        languages: list("languages"),
        quality_control,
    };
    Ok(record.canonicalize())
}

/// Parses an OER corpus file into canonical records.
///
/// Malformed rows are skipped and reported in [`ParseOutcome::issues`];
/// more than 10% malformed rows is a fatal corpus error.
pub fn parse_oer_corpus(
    path: &Path,
    format: CorpusFormat,
    source: CorpusSource,
) -> Result<ParseOutcome<OerRecord>> {
    let bytes = read_file(path)?;
    parse_oer_reader(bytes.as_slice(), format, source)
}

pub fn parse_oer_reader<R: Read>(
    mut reader: R,
    format: CorpusFormat,
    source: CorpusSource,
) -> Result<ParseOutcome<OerRecord>> {
    let (rows, input_rows) = match format {
        CorpusFormat::Csv => csv_rows(reader)?,
        CorpusFormat::Jsonl => {
            let mut text = String::new();
            reader
                .read_to_string(&mut text)
                .map_err(|e| MetaqaError::parse("line-delimited corpus", e))?;
            jsonl_rows(&text)
        }
    };

    let mut records = Vec::with_capacity(rows.len());
    let mut issues = Vec::new();
    let mut seen = HashSet::new();
    for (line, row) in rows {
        match row {
            Ok(record) if !seen.insert(record.url.clone()) => issues.push(RowIssue {
                line,
                reason: format!("duplicate url `{}`", record.url),
            }),
            Ok(record) => records.push(record),
            Err(reason) => issues.push(RowIssue { line, reason }),
        }
    }
    for issue in &issues {
        log::warn!("line {}: skipped row: {}", issue.line, issue.reason);
    }
    check_malformed(input_rows, issues.len())?;

    let manifest = CorpusManifest {
        source,
        record_count: records.len(),
        fields_present: fields_present(&records),
        input_rows,
        rejected_rows: issues.len(),
    };
    Ok(ParseOutcome {
        records,
        manifest,
        issues,
    })
}

type Row = (usize, std::result::Result<OerRecord, String>);

fn csv_rows<R: Read>(reader: R) -> Result<(Vec<Row>, usize)> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let headers = csv
        .headers()
        .map_err(|e| MetaqaError::parse("CSV header", e))?
        .clone();
    let mut columns: BTreeMap<&'static str, usize> = BTreeMap::new();
    for (i, h) in headers.iter().enumerate() {
        if let Some(key) = canonical_column(&normalize_header(h)) {
            columns.entry(key).or_insert(i);
        }
    }

    let mut rows = Vec::new();
    for result in csv.records() {
        let row = match result {
            Ok(record) => {
                let line = record.position().map_or(0, |p| p.line() as usize);
                if !columns.contains_key("url") {
                    return Err(MetaqaError::Corpus(
                        "CSV header has no `url` column".to_owned(),
                    ));
                }
                let cell = |key: &str| {
                    columns
                        .get(key)
                        .and_then(|&i| record.get(i))
                        .map(str::to_owned)
                };
                let list = |key: &str| cell(key).map(|c| split_list(&c)).unwrap_or_default();
                (line, build_record(line, cell, list))
            }
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line() as usize);
                (line, Err(format!("unreadable CSV row: {e}")))
            }
        };
        rows.push(row);
    }
    let n = rows.len();
    Ok((rows, n))
}

fn jsonl_rows(text: &str) -> (Vec<Row>, usize) {
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let row = match serde_json::from_str::<Value>(raw) {
            Ok(Value::Object(map)) => {
                let mut by_key: BTreeMap<&'static str, &Value> = BTreeMap::new();
                for (k, v) in &map {
                    if let Some(key) = canonical_column(&normalize_header(k)) {
                        by_key.entry(key).or_insert(v);
                    }
                }
                let cell = |key: &str| by_key.get(key).and_then(|v| json_cell(v));
                let list = |key: &str| by_key.get(key).map(|v| json_list(v)).unwrap_or_default();
                build_record(line, cell, list)
            }
            Ok(_) => Err("line is not a JSON object".to_owned()),
            Err(e) => Err(format!("invalid JSON: {e}")),
        };
        rows.push((line, row));
    }
    let n = rows.len();
    (rows, n)
}

type FieldCheck = (&'static str, fn(&OerRecord) -> bool);

fn fields_present(records: &[OerRecord]) -> Vec<String> {
    let checks: [FieldCheck; 12] = [
        ("url", |r| !r.url.is_empty()),
        ("title", |r| r.title.is_some()),
        ("description", |r| r.description.is_some()),
        ("educational_type", |r| r.educational_type.is_some()),
        ("date_available", |r| r.date_available.is_some()),
        ("date_issued", |r| r.date_issued.is_some()),
        ("subjects", |r| !r.subjects.is_empty()),
        ("level", |r| r.level.is_some()),
        ("time_required", |r| r.time_required.is_some()),
        ("accessibilities", |r| !r.accessibilities.is_empty()),
        ("languages", |r| !r.languages.is_empty()),
        ("quality_control", |r| {
            r.quality_control != QualityControl::Unknown
        }),
    ];
    checks
        .iter()
        .filter(|(_, present)| records.iter().any(present))
        .map(|(name, _)| (*name).to_owned())
        .collect()
}

/// Canonical line-delimited form: one JSON object per record, absent fields
/// omitted, trailing newline after every record.
pub fn write_oer_records(records: &[OerRecord]) -> String {
    let mut out = String::new();
    for r in records {
        // Serializing plain data with string keys cannot fail.
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    }
    out
}
