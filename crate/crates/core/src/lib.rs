//! Metadata quality assessment for open educational resources.
//!
//! The pipeline profiles how often each metadata field is filled in among
//! quality-controlled resources, scores records against those profiles,
//! trains a random forest that predicts whether a resource went through
//! quality control, and checks the predictions against video ratings.
//!
//! ```no_run
//! use metaqa_core::{build_profile_set, ingest, score_corpus, CorpusFormat, CorpusSource};
//!
//! let parsed = ingest::parse_oer_corpus(
//!     std::path::Path::new("corpus.csv"),
//!     CorpusFormat::Csv,
//!     CorpusSource::SkillsCommons,
//! )?;
//! let profiles = build_profile_set(&parsed.records)?;
//! let scores = score_corpus(&parsed.records, &profiles);
//! # Ok::<(), metaqa_core::MetaqaError>(())
//! ```

pub mod artifacts;
pub mod classifier;
mod error;
pub mod harness;
pub mod ingest;
pub mod model;
pub mod profiler;
pub mod scoring;
pub mod stats;
pub mod synthetic;

pub use artifacts::{
    Provenance, ReportEncoding, FEATURES_FORMAT, MODEL_FORMAT, PROFILE_FORMAT, REPORT_FORMAT,
};
pub use classifier::{
    evaluate, extract_features, feature_importances, feature_table, labeled_features, predict,
    split, train_forest, ForestModel, ForestParams, Importances, Metrics, Prediction, SplitSpec,
};
pub use error::{MetaqaError, Result};
pub use ingest::{CorpusFormat, CorpusManifest, CorpusSource, MappingRules, ParseOutcome};
pub use model::{
    FeatureVector, Field, FieldProfile, Label, LabeledFeatures, OerRecord, QualityControl,
    RatingFn, ScoreReport, VideoRecord, FEATURE_COUNT, FEATURE_NAMES,
};
pub use profiler::{build_profile_set, ProfileOrigin, ProfileSet};
pub use scoring::{availability_score, normal_score, score_corpus, score_record};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 42;
