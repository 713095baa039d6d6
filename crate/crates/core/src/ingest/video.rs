use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use serde_json::Value;

use super::{
    json_cell, json_list, normalize_header, read_file, split_list, CorpusFormat, CorpusManifest,
    CorpusSource, ParseOutcome, RowIssue,
};
use crate::error::{MetaqaError, Result};
use crate::model::VideoRecord;

fn canonical_column(header: &str) -> Option<&'static str> {
    Some(match header {
        "url" | "link" => "url",
        "title" => "title",
        "description" => "description",
        "dislikes" | "number_of_dislikes" | "dislike_count" => "dislikes",
        "length_seconds" | "length" | "duration" => "length_seconds",
        "likes" | "number_of_likes" | "like_count" => "likes",
        "rating" => "rating",
        "subjects" | "subject" | "subject_list" => "subjects",
        "views" | "number_of_views" | "view_count" => "views",
        _ => return None,
    })
}

fn parse_count(name: &str, raw: Option<String>) -> std::result::Result<u64, String> {
    let raw = raw.ok_or_else(|| format!("missing {name}"))?;
    let raw = raw.trim();
    if let Ok(v) = raw.parse::<i64>() {
        return u64::try_from(v).map_err(|_| format!("negative {name} `{raw}`"));
    }
    match raw.parse::<f64>() {
        Ok(v) if v < 0.0 => Err(format!("negative {name} `{raw}`")),
        Ok(v) if v.is_finite() && v.fract() == 0.0 => Ok(v as u64),
        _ => Err(format!("invalid {name} `{raw}`")),
    }
}

/// Seconds, or `H:MM:SS` / `MM:SS`.
fn parse_length(raw: Option<String>) -> std::result::Result<u64, String> {
    let Some(text) = raw.as_deref().map(str::trim) else {
        return Err("missing length_seconds".to_owned());
    };
    if text.contains(':') {
        let mut total: u64 = 0;
        for part in text.split(':') {
            let v: u64 = part
                .parse()
                .map_err(|_| format!("invalid length_seconds `{text}`"))?;
            total = total * 60 + v;
        }
        return Ok(total);
    }
    parse_count("length_seconds", raw)
}

fn build_video(
    cell: impl Fn(&str) -> Option<String>,
    list: impl Fn(&str) -> Vec<String>,
) -> std::result::Result<VideoRecord, String> {
    let url = cell("url").map(|u| u.trim().to_owned()).unwrap_or_default();
    if url.is_empty() {
        return Err("missing url".to_owned());
    }
    let rating_raw = cell("rating").ok_or("missing rating")?;
    let rating: f64 = rating_raw
        .trim()
        .parse()
        .map_err(|_| format!("invalid rating `{rating_raw}`"))?;
    if !(0.0..=5.0).contains(&rating) {
        return Err(format!("rating {rating} outside [0, 5]"));
    }
    Ok(VideoRecord {
        url,
        title: cell("title")
            .map(|t| t.trim().to_owned())
            .unwrap_or_default(),
        description: cell("description")
            .map(|d| d.trim().to_owned())
            .filter(|d| !d.is_empty()),
        dislikes: parse_count("dislikes", cell("dislikes"))?,
        length_seconds: parse_length(cell("length_seconds"))?,
        likes: parse_count("likes", cell("likes"))?,
        rating,
        subjects: list("subjects"),
        views: parse_count("views", cell("views"))?,
    })
}

/// Parses a video corpus. Records violating the value ranges (rating in
/// [0, 5], non-negative counts) are rejected rather than clamped.
pub fn parse_video_corpus(path: &Path, format: CorpusFormat) -> Result<ParseOutcome<VideoRecord>> {
    let bytes = read_file(path)?;
    parse_video_reader(bytes.as_slice(), format)
}

pub fn parse_video_reader<R: Read>(
    mut reader: R,
    format: CorpusFormat,
) -> Result<ParseOutcome<VideoRecord>> {
    let mut rows: Vec<(usize, std::result::Result<VideoRecord, String>)> = Vec::new();
    match format {
        CorpusFormat::Csv => {
            let mut csv = csv::ReaderBuilder::new().from_reader(reader);
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
            for result in csv.records() {
                rows.push(match result {
                    Ok(record) => {
                        let line = record.position().map_or(0, |p| p.line() as usize);
                        let cell = |key: &str| {
                            columns
                                .get(key)
                                .and_then(|&i| record.get(i))
                                .map(str::to_owned)
                        };
                        let list =
                            |key: &str| cell(key).map(|c| split_list(&c)).unwrap_or_default();
                        (line, build_video(cell, list))
                    }
                    Err(e) => (
                        e.position().map_or(0, |p| p.line() as usize),
                        Err(format!("unreadable CSV row: {e}")),
                    ),
                });
            }
        }
        CorpusFormat::Jsonl => {
            let mut text = String::new();
            reader
                .read_to_string(&mut text)
                .map_err(|e| MetaqaError::parse("line-delimited corpus", e))?;
            for (idx, raw) in text.lines().enumerate() {
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
                        let list =
                            |key: &str| by_key.get(key).map(|v| json_list(v)).unwrap_or_default();
                        build_video(cell, list)
                    }
                    Ok(_) => Err("line is not a JSON object".to_owned()),
                    Err(e) => Err(format!("invalid JSON: {e}")),
                };
                rows.push((idx + 1, row));
            }
        }
    }

    let input_rows = rows.len();
    let mut records = Vec::with_capacity(rows.len());
    let mut issues = Vec::new();
    for (line, row) in rows {
        match row {
            Ok(v) => records.push(v),
            Err(reason) => {
                log::warn!("line {line}: rejected video: {reason}");
                issues.push(RowIssue { line, reason });
            }
        }
    }
    let manifest = CorpusManifest {
        source: CorpusSource::VideoPlatform,
        record_count: records.len(),
        fields_present: video_fields_present(&records),
        input_rows,
        rejected_rows: issues.len(),
    };
    Ok(ParseOutcome {
        records,
        manifest,
        issues,
    })
}

fn video_fields_present(records: &[VideoRecord]) -> Vec<String> {
    if records.is_empty() {
        return Vec::new();
    }
    let mut fields = vec!["url", "title"];
    if records.iter().any(|r| r.description.is_some()) {
        fields.push("description");
    }
    fields.extend(["dislikes", "length_seconds", "likes", "rating"]);
    if records.iter().any(|r| !r.subjects.is_empty()) {
        fields.push("subjects");
    }
    fields.push("views");
    fields.into_iter().map(str::to_owned).collect()
}

/// Canonical line-delimited form of a video corpus.
pub fn write_video_records(records: &[VideoRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    }
    out
}
