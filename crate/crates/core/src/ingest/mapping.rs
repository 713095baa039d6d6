use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{MetaqaError, Result};
use crate::model::{OerRecord, QualityControl, VideoRecord};

/// Title keywords that mark a video as stating its audience level.
pub const DEFAULT_LEVEL_KEYWORDS: [&str; 8] = [
    "beginner",
    "intermediate",
    "advanced",
    "intro",
    "introduction",
    "basics",
    "fundamentals",
    "101",
];

/// How video properties map onto OER metadata fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct MappingRules {
    /// Case-insensitive. A single-word keyword matches any title word it is
    /// a prefix of ("beginner" matches "Beginners"); a keyword containing
    /// spaces matches as a substring of the lower-cased title.
    pub level_keywords: Vec<String>,
    pub default_languages: Vec<String>,
    pub default_accessibilities: Vec<String>,
}

impl Default for MappingRules {
    fn default() -> Self {
        MappingRules {
            level_keywords: DEFAULT_LEVEL_KEYWORDS
                .iter()
                .map(|s| s.to_string())
                .collect(),
            default_languages: Vec::new(),
            default_accessibilities: Vec::new(),
        }
    }
}

impl MappingRules {
    pub fn load(path: &Path) -> Result<MappingRules> {
        let text = std::fs::read_to_string(path).map_err(|e| MetaqaError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| MetaqaError::parse("mapping rules", e))
    }

    /// The first keyword found in `title`, if any.
    pub fn level_keyword(&self, title: &str) -> Option<&str> {
        let lower = title.to_lowercase();
        let words: Vec<&str> = lower
            .split(|c: char| !c.is_alphanumeric())
            .filter(|w| !w.is_empty())
            .collect();
        self.level_keywords.iter().map(String::as_str).find(|kw| {
            let kw_lower = kw.trim().to_lowercase();
            if kw_lower.is_empty() {
                false
            } else if kw_lower.contains(char::is_whitespace) {
                lower.contains(&kw_lower)
            } else {
                words.iter().any(|w| w.starts_with(&kw_lower))
            }
        })
    }
}

/// Maps a video onto the OER schema so it can be scored and classified.
///
/// Every video has a length, so `time_required` is always available.
/// `level` is available only when the title carries a level keyword.
pub fn video_to_oer(video: &VideoRecord, rules: &MappingRules) -> OerRecord {
    OerRecord {
        url: video.url.clone(),
        title: Some(video.title.clone()),
        description: video.description.clone(),
        educational_type: Some("video".to_owned()),
        date_available: None,
        date_issued: None,
        subjects: video.subjects.clone(),
        level: rules.level_keyword(&video.title).map(str::to_owned),
        time_required: Some(format!("PT{}S", video.length_seconds)),
        accessibilities: rules.default_accessibilities.clone(),
        languages: rules.default_languages.clone(),
        quality_control: QualityControl::Unknown,
    }
    .canonicalize()
}
