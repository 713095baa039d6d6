use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use log::{info, warn};
use metaqa_core::artifacts::{
    self, corpus_hash, read_model, read_profile, write_feature_table, write_file, write_model,
    write_predictions, write_profile, write_score_report, PredictionRow,
};
use metaqa_core::harness::{explore, validate_by_subject, validation_report, ValidationOutcome};
use metaqa_core::ingest::{
    parse_oer_corpus, parse_video_corpus, write_oer_records, write_video_records, CorpusManifest,
};
use metaqa_core::{
    build_profile_set, evaluate, feature_table, predict, score_corpus, split, train_forest,
    CorpusFormat, CorpusSource, ForestParams, MappingRules, OerRecord, ProfileSet, Provenance,
    QualityControl, SplitSpec, VideoRecord, FEATURE_NAMES,
};

use crate::args::*;

/// Effective configuration of one run, recorded in artifact provenance.
struct RunConfig(BTreeMap<String, String>);

impl RunConfig {
    fn new(subcommand: &str) -> RunConfig {
        RunConfig(BTreeMap::from([(
            "subcommand".to_owned(),
            subcommand.to_owned(),
        )]))
    }

    fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.0.insert(key.to_owned(), value.to_string());
        self
    }

    fn provenance(&self) -> Provenance {
        Provenance::new(self.0.clone())
    }
}

fn format_of(path: &Path, flag: Option<FormatArg>) -> CorpusFormat {
    flag.map(Into::into)
        .unwrap_or_else(|| CorpusFormat::from_path(path))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    write_file(path, contents)?;
    info!("wrote {}", path.display());
    Ok(())
}

fn load_records(path: &Path, format: Option<FormatArg>) -> Result<Vec<OerRecord>> {
    Ok(parse_oer_corpus(path, format_of(path, format), CorpusSource::Generic)?.records)
}

fn load_videos(path: &Path, format: Option<FormatArg>) -> Result<Vec<VideoRecord>> {
    Ok(parse_video_corpus(path, format_of(path, format))?.records)
}

fn load_profile(source: &ProfileSource, config: &mut RunConfig) -> Result<ProfileSet> {
    match &source.profile {
        Some(path) => {
            config.set("profile", path.display());
            let text = artifacts::read_file(path)?;
            let (set, _) = read_profile(&text)
                .with_context(|| format!("reading profile {}", path.display()))?;
            Ok(set)
        }
        None => {
            config.set("profile", "canned");
            Ok(ProfileSet::canned())
        }
    }
}

fn load_model(path: &Path) -> Result<metaqa_core::ForestModel> {
    let text = artifacts::read_file(path)?;
    let (model, _) =
        read_model(&text).with_context(|| format!("reading model {}", path.display()))?;
    Ok(model)
}

fn print_manifest(manifest: &CorpusManifest, warnings: usize, output: &Path) {
    println!(
        "{} records from {} rows ({} rejected, {} warnings) -> {}",
        manifest.record_count,
        manifest.input_rows,
        manifest.rejected_rows,
        warnings,
        output.display()
    );
    println!("fields present: {}", manifest.fields_present.join(", "));
}

pub fn ingest(args: &IngestArgs) -> Result<()> {
    let format = format_of(&args.input, args.format);
    match args.kind {
        KindArg::Oer => {
            let out = parse_oer_corpus(&args.input, format, args.source.into())?;
            write(&args.output, &write_oer_records(&out.records))?;
            print_manifest(&out.manifest, out.warning_count(), &args.output);
        }
        KindArg::Video => {
            let out = parse_video_corpus(&args.input, format)?;
            write(&args.output, &write_video_records(&out.records))?;
            print_manifest(&out.manifest, out.warning_count(), &args.output);
        }
    }
    Ok(())
}

pub fn profile(args: &ProfileArgs) -> Result<()> {
    let mut config = RunConfig::new("profile");
    let set = match &args.input.records {
        Some(path) if !args.canned => {
            config.set("records", path.display());
            build_profile_set(&load_records(path, args.input.format)?)?
        }
        _ => {
            config.set("canned", true);
            ProfileSet::canned()
        }
    };
    write(&args.output, &write_profile(&set, &config.provenance()))?;
    println!("{:<16} {:>8} {:>10}  rating", "field", "rate", "normalized");
    for p in &set.profiles {
        let rating = match p.rating_fn {
            metaqa_core::RatingFn::NormalFit {
                mean,
                scale,
                degenerate,
            } => {
                format!(
                    "normal(mean {mean:.3}, scale {scale:.3}){}",
                    if degenerate { " degenerate" } else { "" }
                )
            }
            metaqa_core::RatingFn::Boolean => "boolean".to_owned(),
        };
        println!(
            "{:<16} {:>8.4} {:>10.4}  {rating}",
            p.field.as_str(),
            p.importance_rate,
            p.normalized_importance_rate
        );
    }
    if args.canned {
        println!("reference constants -> {}", args.output.display());
    } else {
        println!(
            "{} controlled of {} records -> {}",
            set.controlled_subset_size,
            set.source_corpus_size,
            args.output.display()
        );
    }
    Ok(())
}

pub fn score(args: &ScoreArgs) -> Result<()> {
    let mut config = RunConfig::new("score");
    config.set("records", args.records.records.display());
    let profiles = load_profile(&args.profile, &mut config)?;
    let records = load_records(&args.records.records, args.records.format)?;
    let reports = score_corpus(&records, &profiles);
    write(
        &args.output,
        &write_score_report(&reports, &config.provenance(), args.encoding.into()),
    )?;
    println!(
        "scored {} records -> {}",
        reports.len(),
        args.output.display()
    );
    Ok(())
}

fn forest_params(args: &TrainArgs) -> ForestParams {
    ForestParams {
        n_trees: args.forest.trees,
        max_depth: args.forest.max_depth,
        min_samples_split: args.forest.min_samples_split,
        min_samples_leaf: args.forest.min_samples_leaf,
        max_features: args.forest.max_features,
        bootstrap: !args.forest.no_bootstrap,
        seed: args.seed,
    }
}

pub fn train(args: &TrainArgs) -> Result<()> {
    let mut config = RunConfig::new("train");
    let params = forest_params(args);
    let spec = SplitSpec {
        train_fraction: args.train_fraction,
        stratified: !args.no_stratify,
        seed: args.seed,
    };
    config
        .set("records", args.records.records.display())
        .set("seed", params.seed)
        .set("trees", params.n_trees)
        .set(
            "max_depth",
            params
                .max_depth
                .map_or("none".to_owned(), |d| d.to_string()),
        )
        .set("min_samples_split", params.min_samples_split)
        .set("min_samples_leaf", params.min_samples_leaf)
        .set("max_features", params.effective_max_features())
        .set("bootstrap", params.bootstrap)
        .set("train_fraction", spec.train_fraction)
        .set("stratified", spec.stratified);
    let profiles = load_profile(&args.profile, &mut config)?;

    let records = load_records(&args.records.records, args.records.format)?;
    let (labeled, unknown): (Vec<OerRecord>, Vec<OerRecord>) = records
        .into_iter()
        .partition(|r| r.quality_control != QualityControl::Unknown);
    if !unknown.is_empty() {
        warn!(
            "{} records without a quality-control label left out of training",
            unknown.len()
        );
    }
    let table = feature_table(&labeled, &profiles)?;
    let (train_rows, test_rows) = split(&table, &spec)?;
    let mut model = train_forest(&train_rows, &params)?;
    model.training_corpus_hash = Some(corpus_hash(&labeled));
    let metrics = evaluate(&model, &test_rows)?;

    let provenance = config.provenance();
    write(&args.output, &write_model(&model, &provenance))?;
    if let Some(path) = &args.features {
        write(path, &write_feature_table(&table))?;
    }
    if let Some(path) = &args.metrics {
        let json = serde_json::json!({
            "format": metaqa_core::REPORT_FORMAT,
            "kind": "metrics",
            "provenance": provenance,
            "train_size": train_rows.len(),
            "test_size": test_rows.len(),
            "metrics": metrics,
            "importances": FEATURE_NAMES.iter().zip(&model.importances).map(|(n, v)| (n.to_string(), *v)).collect::<BTreeMap<_, _>>(),
        });
        write(path, &(serde_json::to_string_pretty(&json)? + "\n"))?;
    }

    println!(
        "train {} / test {} records, seed {}",
        train_rows.len(),
        test_rows.len(),
        args.seed
    );
    println!("accuracy            {:.4}", metrics.accuracy);
    println!("F1 with control     {:.4}", metrics.f1_with_control);
    println!("F1 without control  {:.4}", metrics.f1_without_control);
    println!(
        "confusion (actual x predicted, with/without): [[{}, {}], [{}, {}]]",
        metrics.confusion[0][0],
        metrics.confusion[0][1],
        metrics.confusion[1][0],
        metrics.confusion[1][1]
    );
    println!(
        "feature importances{}:",
        if model.importances_degenerate {
            " (no splits, uniform)"
        } else {
            ""
        }
    );
    let mut ranked: Vec<(&str, f64)> = FEATURE_NAMES
        .iter()
        .copied()
        .zip(model.importances.iter().copied())
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
    for (name, value) in ranked {
        println!("  {name:<24} {value:.4}");
    }
    Ok(())
}

pub fn predict_cmd(args: &PredictArgs) -> Result<()> {
    let mut config = RunConfig::new("predict");
    config
        .set("model", args.model.display())
        .set("records", args.records.records.display());
    let profiles = load_profile(&args.profile, &mut config)?;
    let model = load_model(&args.model)?;
    let records = load_records(&args.records.records, args.records.format)?;
    let rows = records
        .iter()
        .map(|r| {
            let x = metaqa_core::extract_features(r, &profiles);
            Ok(PredictionRow::new(
                r.url.clone(),
                &predict(&model, x.as_slice())?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    write(
        &args.output,
        &write_predictions(&rows, &config.provenance()),
    )?;
    let with = rows
        .iter()
        .filter(|r| r.label == metaqa_core::Label::WithControl)
        .count();
    println!(
        "{} records: {} with control, {} without -> {}",
        rows.len(),
        with,
        rows.len() - with,
        args.output.display()
    );
    Ok(())
}

fn print_validation(outcome: &ValidationOutcome) {
    println!(
        "{:<28} {:>6} {:>6} {:>10} {:>10} {:>10}",
        "subject", "n_with", "n_wout", "with", "without", "difference"
    );
    let cell = |v: Option<f64>| v.map_or_else(|| "-".to_owned(), |x| format!("{x:.3}"));
    for r in &outcome.rows {
        println!(
            "{:<28} {:>6} {:>6} {:>10} {:>10} {:>10} {}",
            r.subject,
            r.n_with_control,
            r.n_without_control,
            cell(r.mean_rating_with_control),
            cell(r.mean_rating_without_control),
            r.rating_difference
                .map_or_else(|| "-".to_owned(), |d| format!("{d:+.3}")),
            r.sign()
        );
    }
    let s = &outcome.summary;
    println!(
        "{:<28} {:>6} {:>6} {:>10} {:>10} {:>10}",
        "Average",
        s.total_with_control,
        s.total_without_control,
        "",
        "",
        s.average_difference
            .map_or_else(|| "-".to_owned(), |d| format!("{d:+.3}"))
    );
    println!(
        "positive in {} of {} comparable subjects ({} negative, {} zero)",
        s.positive, s.comparable_subjects, s.negative, s.zero
    );
    if !s.incomparable_subjects.is_empty() {
        println!(
            "left out (one group empty): {}",
            s.incomparable_subjects.join(", ")
        );
    }
}

pub fn validate(args: &ValidateArgs) -> Result<()> {
    let mut config = RunConfig::new("validate");
    config
        .set("videos", args.videos.display())
        .set("model", args.model.display());
    let profiles = load_profile(&args.profile, &mut config)?;
    let rules = match &args.rules {
        Some(path) => {
            config.set("rules", path.display());
            MappingRules::load(path)?
        }
        None => MappingRules::default(),
    };
    config.set("level_keywords", rules.level_keywords.join("|"));
    let model = load_model(&args.model)?;
    let videos = load_videos(&args.videos, args.format)?;
    let outcome = validate_by_subject(&videos, &model, &profiles, &rules)?;
    let provenance = config.provenance();
    write(
        &args.output,
        &validation_report(&outcome.rows, &outcome.summary, &provenance),
    )?;
    if let Some(path) = &args.predictions {
        let rows: Vec<PredictionRow> = outcome
            .predictions
            .iter()
            .map(|p| PredictionRow::new(p.url.clone(), &p.prediction))
            .collect();
        write(path, &write_predictions(&rows, &provenance))?;
    }
    print_validation(&outcome);
    Ok(())
}

pub fn explore_cmd(args: &ExploreArgs) -> Result<()> {
    let mut config = RunConfig::new("explore");
    config.set("records", args.records.records.display());
    let records = load_records(&args.records.records, args.records.format)?;
    let report = explore(&records);
    let mut files = report.files(&config.provenance());
    if args.svg {
        files.extend(report.svg_files());
    }
    for (name, contents) in &files {
        write(&args.output_dir.join(name), contents)?;
    }
    println!(
        "{} records, {} dated ({} without a date); {} report files -> {}",
        report.corpus_size,
        report.corpus_size - report.yearly.excluded,
        report.yearly.excluded,
        files.len(),
        args.output_dir.display()
    );
    Ok(())
}
