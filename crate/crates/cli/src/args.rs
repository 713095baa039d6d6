use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use metaqa_core::{CorpusFormat, CorpusSource, ReportEncoding};

#[derive(Debug, Parser)]
#[command(
    name = "metaqa",
    about = "Metadata quality assessment for open educational resources"
)]
pub struct Cli {
    /// Worker threads for training and scoring (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    /// More log output; repeat for debug detail.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a raw corpus into canonical line-delimited records.
    Ingest(IngestArgs),
    /// Fit field profiles on the quality-controlled records.
    Profile(ProfileArgs),
    /// Score records against a profile set.
    Score(ScoreArgs),
    /// Train the quality-control classifier and report held-out metrics.
    Train(TrainArgs),
    /// Predict the quality-control label of records.
    Predict(PredictArgs),
    /// Compare video ratings between predicted groups, per subject.
    Validate(ValidateArgs),
    /// Write availability, yearly and length reports.
    Explore(ExploreArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Jsonl,
}

impl From<FormatArg> for CorpusFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => CorpusFormat::Csv,
            FormatArg::Jsonl => CorpusFormat::Jsonl,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Oer,
    Video,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    SkillsCommons,
    VideoPlatform,
    Generic,
}

impl From<SourceArg> for CorpusSource {
    fn from(s: SourceArg) -> Self {
        match s {
            SourceArg::SkillsCommons => CorpusSource::SkillsCommons,
            SourceArg::VideoPlatform => CorpusSource::VideoPlatform,
            SourceArg::Generic => CorpusSource::Generic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EncodingArg {
    Csv,
    Jsonl,
}

impl From<EncodingArg> for ReportEncoding {
    fn from(e: EncodingArg) -> Self {
        match e {
            EncodingArg::Csv => ReportEncoding::Csv,
            EncodingArg::Jsonl => ReportEncoding::Jsonl,
        }
    }
}

/// A record file plus an optional format override.
#[derive(Debug, Args)]
pub struct RecordsArg {
    /// OER records (canonical output of `ingest`, or a raw CSV).
    #[arg(long, value_name = "PATH")]
    pub records: PathBuf,

    /// Format of `--records`; guessed from the extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Guessed from the extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    #[arg(long, value_enum, default_value = "oer")]
    pub kind: KindArg,
    #[arg(long, value_enum, default_value = "generic")]
    pub source: SourceArg,
    /// Canonical line-delimited output.
    #[arg(long, value_name = "PATH")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub input: OptionalRecords,
    /// Write the reference constants instead of fitting.
    #[arg(long, conflicts_with = "records")]
    pub canned: bool,
    #[arg(long, value_name = "PATH")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct OptionalRecords {
    #[arg(long, value_name = "PATH", required_unless_present = "canned")]
    pub records: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

/// Profile file, or the reference constants.
#[derive(Debug, Args)]
pub struct ProfileSource {
    #[arg(long, value_name = "PATH", required_unless_present = "canned_profile")]
    pub profile: Option<PathBuf>,
    /// Use the reference profile constants.
    #[arg(long, conflicts_with = "profile")]
    pub canned_profile: bool,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub records: RecordsArg,
    #[command(flatten)]
    pub profile: ProfileSource,
    #[arg(long, value_name = "PATH")]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub encoding: EncodingArg,
}

#[derive(Debug, Args)]
pub struct ForestArgs {
    #[arg(long, default_value_t = 100)]
    pub trees: usize,
    /// Unlimited when omitted.
    #[arg(long)]
    pub max_depth: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub min_samples_split: usize,
    #[arg(long, default_value_t = 1)]
    pub min_samples_leaf: usize,
    /// Features searched per node (default 3).
    #[arg(long)]
    pub max_features: Option<usize>,
    /// Train every tree on the full training set.
    #[arg(long)]
    pub no_bootstrap: bool,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub records: RecordsArg,
    #[command(flatten)]
    pub profile: ProfileSource,
    #[arg(long, default_value_t = metaqa_core::DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub forest: ForestArgs,
    #[arg(long, default_value_t = 0.8)]
    pub train_fraction: f64,
    /// Split without keeping class proportions.
    #[arg(long)]
    pub no_stratify: bool,
    /// Model output.
    #[arg(long, value_name = "PATH")]
    pub output: PathBuf,
    /// Also write held-out metrics as JSON.
    #[arg(long, value_name = "PATH")]
    pub metrics: Option<PathBuf>,
    /// Also write the labeled feature table.
    #[arg(long, value_name = "PATH")]
    pub features: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long, value_name = "PATH")]
    pub model: PathBuf,
    #[command(flatten)]
    pub records: RecordsArg,
    #[command(flatten)]
    pub profile: ProfileSource,
    #[arg(long, value_name = "PATH")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Video records (canonical output of `ingest --kind video`, or a raw CSV).
    #[arg(long, value_name = "PATH")]
    pub videos: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    #[arg(long, value_name = "PATH")]
    pub model: PathBuf,
    #[command(flatten)]
    pub profile: ProfileSource,
    /// JSON file overriding the video-to-OER mapping rules.
    #[arg(long, value_name = "PATH")]
    pub rules: Option<PathBuf>,
    /// Per-subject report.
    #[arg(long, value_name = "PATH")]
    pub output: PathBuf,
    /// Also write per-video predictions.
    #[arg(long, value_name = "PATH")]
    pub predictions: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExploreArgs {
    #[command(flatten)]
    pub records: RecordsArg,
    #[arg(long, value_name = "DIR")]
    pub output_dir: PathBuf,
    /// Also draw the length histograms as SVG.
    #[arg(long)]
    pub svg: bool,
}
