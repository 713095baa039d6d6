//! Seeded generators for OER and video corpora with a known quality signal.
//!
//! Used by tests, benchmarks and the validation self-check when the
//! published datasets are not at hand. Availability probabilities and
//! length distributions are set per class; lengths follow gamma
//! distributions with the requested mean and standard deviation so that
//! they stay positive without clipping.

use chrono::NaiveDate;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Normal};

use crate::model::{OerRecord, QualityControl, VideoRecord};

/// Subjects of the video validation corpus.
pub const VIDEO_SUBJECTS: [&str; 32] = [
    "bioethics",
    "deep learning",
    "infectious disease",
    "sleep disorder",
    "apache spark",
    "data mining",
    "allergies",
    "vaccinations",
    "women and nutrition",
    "data management",
    "SQL language",
    "brain tumors",
    "big data",
    "cancer prevention",
    "data cleaning",
    "sun awareness",
    "addiction",
    "data visualization",
    "psychology",
    "neural network",
    "apache hadoop",
    "stress management",
    "tensorflow",
    "obesity care",
    "python language",
    "R language",
    "statistics",
    "text mining",
    "machine learning",
    "prostate cancer",
    "eye care",
    "smoking health risks",
];

const WORDS: [&str; 24] = [
    "data",
    "health",
    "care",
    "systems",
    "network",
    "patient",
    "analysis",
    "security",
    "design",
    "clinical",
    "programming",
    "course",
    "module",
    "nursing",
    "cloud",
    "lab",
    "skills",
    "safety",
    "database",
    "practice",
    "web",
    "medical",
    "support",
    "project",
];

const LEVELS: [&str; 4] = ["beginner", "intermediate", "advanced", "postsecondary"];

/// Per-class generation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassShape {
    pub p_title: f64,
    pub p_description: f64,
    pub p_subjects: f64,
    pub p_level: f64,
    pub p_language: f64,
    pub p_time_required: f64,
    pub p_accessibilities: f64,
    /// (mean, standard deviation) of word / entry counts.
    pub title_len: (f64, f64),
    pub description_len: (f64, f64),
    pub subjects_len: (f64, f64),
    /// Inclusive year range of availability dates.
    pub years: (i32, i32),
}

impl ClassShape {
    /// Availability rates and length fits of the reference benchmark.
    pub fn reference_controlled() -> ClassShape {
        ClassShape {
            p_title: 1.0,
            p_description: 1.0,
            p_subjects: 0.86,
            p_level: 0.98,
            p_language: 0.92,
            p_time_required: 0.58,
            p_accessibilities: 0.59,
            title_len: (5.5, 2.5),
            description_len: (54.5, 40.0),
            subjects_len: (4.5, 3.5),
            years: (2012, 2018),
        }
    }

    /// Sparser, noisier metadata for resources that skipped review.
    pub fn uncontrolled() -> ClassShape {
        ClassShape {
            p_title: 1.0,
            p_description: 0.93,
            p_subjects: 0.7,
            p_level: 0.25,
            p_language: 0.55,
            p_time_required: 0.3,
            p_accessibilities: 0.2,
            title_len: (8.0, 5.0),
            description_len: (35.0, 45.0),
            subjects_len: (2.5, 2.5),
            years: (2014, 2020),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OerCorpusSpec {
    pub n_with_control: usize,
    pub n_without_control: usize,
    pub with_control: ClassShape,
    pub without_control: ClassShape,
}

impl OerCorpusSpec {
    /// Same size and class balance as the reference repository corpus.
    pub fn reference_sized() -> OerCorpusSpec {
        OerCorpusSpec {
            n_with_control: 4651,
            n_without_control: 4236,
            with_control: ClassShape::reference_controlled(),
            without_control: ClassShape::uncontrolled(),
        }
    }

    /// Roughly balanced corpus of `n` records.
    pub fn small(n: usize) -> OerCorpusSpec {
        OerCorpusSpec {
            n_with_control: n - n / 2,
            n_without_control: n / 2,
            ..OerCorpusSpec::reference_sized()
        }
    }
}

/// Gamma-distributed count with the given mean and sd, at least 1.
fn sample_len<R: Rng>(rng: &mut R, (mean, sd): (f64, f64)) -> usize {
    let shape = (mean / sd).powi(2);
    let scale = sd * sd / mean;
    let g = Gamma::new(shape, scale).expect("positive gamma parameters");
    (g.sample(rng).round() as usize).max(1)
}

fn random_words<R: Rng>(rng: &mut R, len: (f64, f64)) -> String {
    let n = sample_len(rng, len);
    (0..n)
        .map(|_| *WORDS.choose(rng).expect("non-empty"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn oer_record<R: Rng>(
    rng: &mut R,
    url: String,
    shape: &ClassShape,
    qc: QualityControl,
) -> OerRecord {
    let mut rec = OerRecord::new(url);
    if rng.random_bool(shape.p_title) {
        rec.title = Some(random_words(rng, shape.title_len));
    }
    if rng.random_bool(shape.p_description) {
        rec.description = Some(random_words(rng, shape.description_len));
    }
    if rng.random_bool(shape.p_subjects) {
        let n = sample_len(rng, shape.subjects_len);
        rec.subjects = (0..n)
            .map(|i| format!("{} {i}", WORDS.choose(rng).unwrap()))
            .collect();
    }
    if rng.random_bool(shape.p_level) {
        rec.level = Some((*LEVELS.choose(rng).unwrap()).to_owned());
    }
    if rng.random_bool(shape.p_language) {
        rec.languages = vec!["en".to_owned()];
    }
    if rng.random_bool(shape.p_time_required) {
        rec.time_required = Some(format!("PT{}H", rng.random_range(1..40)));
    }
    if rng.random_bool(shape.p_accessibilities) {
        rec.accessibilities = vec!["captions".to_owned(), "screen reader".to_owned()];
    }
    let year = rng.random_range(shape.years.0..=shape.years.1);
    rec.date_available =
        NaiveDate::from_ymd_opt(year, rng.random_range(1..=12), rng.random_range(1..=28));
    rec.educational_type = Some("course".to_owned());
    rec.quality_control = qc;
    rec
}

/// Generates a corpus; controlled records come first.
pub fn generate_oer_corpus(spec: &OerCorpusSpec, seed: u64) -> Vec<OerRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(spec.n_with_control + spec.n_without_control);
    for i in 0..spec.n_with_control {
        let url = format!("https://oer.example/resource/c{i}");
        out.push(oer_record(
            &mut rng,
            url,
            &spec.with_control,
            QualityControl::WithControl,
        ));
    }
    for i in 0..spec.n_without_control {
        let url = format!("https://oer.example/resource/u{i}");
        out.push(oer_record(
            &mut rng,
            url,
            &spec.without_control,
            QualityControl::WithoutControl,
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct VideoCorpusSpec {
    pub subjects: Vec<String>,
    pub videos_per_subject: usize,
    /// Probability that a video is generated with controlled-style metadata.
    pub p_controlled_style: f64,
    pub base_rating: f64,
    pub rating_sd: f64,
    /// Added to the mean rating of controlled-style videos.
    pub quality_boost: f64,
}

impl Default for VideoCorpusSpec {
    fn default() -> Self {
        VideoCorpusSpec {
            subjects: VIDEO_SUBJECTS.iter().map(|s| s.to_string()).collect(),
            videos_per_subject: 28,
            p_controlled_style: 0.54,
            base_rating: 4.4,
            rating_sd: 0.25,
            quality_boost: 0.1,
        }
    }
}

/// A generated video and whether it carries controlled-style metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticVideo {
    pub video: VideoRecord,
    pub controlled_style: bool,
}

/// Generates videos whose ratings are `quality_boost` higher on average
/// when the metadata looks like that of reviewed resources.
pub fn generate_video_corpus(spec: &VideoCorpusSpec, seed: u64) -> Vec<SyntheticVideo> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, spec.rating_sd).expect("finite sd");
    let mut out = Vec::new();
    for subject in &spec.subjects {
        for i in 0..spec.videos_per_subject {
            let good = rng.random_bool(spec.p_controlled_style);
            let (title, description) = if good {
                let mut title = random_words(&mut rng, (4.5, 1.5));
                if rng.random_bool(0.85) {
                    let kw = ["Introduction to", "Beginner", "Advanced", "Basics of"];
                    title = format!("{} {title}", kw.choose(&mut rng).unwrap());
                }
                (title, Some(random_words(&mut rng, (55.0, 30.0))))
            } else {
                let title = random_words(&mut rng, (11.0, 4.0));
                let description = rng
                    .random_bool(0.5)
                    .then(|| random_words(&mut rng, (6.0, 4.0)));
                (title, description)
            };
            let mean = spec.base_rating + if good { spec.quality_boost } else { 0.0 };
            let rating = (mean + noise.sample(&mut rng)).clamp(0.0, 5.0);
            let likes = rng.random_range(10..5000u64);
            out.push(SyntheticVideo {
                video: VideoRecord {
                    url: format!("https://video.example/{}/{i}", subject.replace(' ', "-")),
                    title,
                    description,
                    dislikes: ((5.0 - rating) / 5.0 * likes as f64).round() as u64,
                    length_seconds: rng.random_range(60..3600),
                    likes,
                    rating,
                    subjects: vec![subject.clone()],
                    views: likes * rng.random_range(20..200),
                },
                controlled_style: good,
            });
        }
    }
    out
}
