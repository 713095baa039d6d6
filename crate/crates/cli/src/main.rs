mod args;
mod commands;

use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};
use metaqa_core::{MetaqaError, FEATURES_FORMAT, MODEL_FORMAT, PROFILE_FORMAT, REPORT_FORMAT};

use args::{Cli, Command};

fn version() -> String {
    format!(
        "{}\nformats: {PROFILE_FORMAT}, {MODEL_FORMAT}, {REPORT_FORMAT}, {FEATURES_FORMAT}",
        env!("CARGO_PKG_VERSION")
    )
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    match &cli.command {
        Command::Ingest(a) => commands::ingest(a),
        Command::Profile(a) => commands::profile(a),
        Command::Score(a) => commands::score(a),
        Command::Train(a) => commands::train(a),
        Command::Predict(a) => commands::predict_cmd(a),
        Command::Validate(a) => commands::validate(a),
        Command::Explore(a) => commands::explore_cmd(a),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let invariant = err.chain().any(|e| {
        matches!(
            e.downcast_ref::<MetaqaError>(),
            Some(MetaqaError::Invariant(_))
        )
    });
    if invariant {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let matches = Cli::command().version(version()).try_get_matches();
    let cli = match matches.and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
