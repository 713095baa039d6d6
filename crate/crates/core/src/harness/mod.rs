//! Corpus exploration and the per-subject rating validation.

pub mod explore;
mod svg;
pub mod validate;

pub use explore::{
    availability_crosstab, explore, length_histograms, yearly_control_proportion, CrosstabRow,
    ExploreReport, Histogram, LengthHistograms, YearPoint, YearlySeries,
};
pub use svg::histogram_svg;
pub use validate::{
    predict_videos, rating_std, subject_rows, validate_by_subject, validation_report, SubjectRow,
    ValidationOutcome, ValidationSummary, VideoPrediction,
};
