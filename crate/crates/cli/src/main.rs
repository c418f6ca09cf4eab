mod commands;
mod manifest;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Exit;
use settings::Settings;

#[derive(Parser)]
#[command(
    name = "kgforge",
    version,
    about = "Build and evaluate (text, knowledge graph) datasets"
)]
struct Cli {
    /// Plain-text `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for extract, generate-text and evaluate (0 = all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Where to write the run manifest (default: next to the main output).
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a TSV or Wikidata JSON dump into a knowledge-base snapshot.
    Ingest(commands::ingest::Args),
    /// Grow the entity-expansion blacklist with evaluator verdicts.
    CurateBlacklist(commands::curate::Args),
    /// Sample filtered subgraphs from a knowledge base.
    Extract(commands::extract::Args),
    /// Re-verify the filter and connectivity invariants of a subgraph file.
    Check(commands::check::Args),
    /// Write one text per subgraph with a chat model.
    GenerateText(commands::generate::Args),
    /// Shuffle samples into train.jsonl and test.jsonl.
    Assemble(commands::assemble::Args),
    /// Triple-count and token-count summaries of a dataset.
    Stats(commands::stats::Args),
    /// Score predicted graphs or texts against references.
    Evaluate(commands::evaluate::Args),
    /// Bootstrap intervals and signed-rank tests against baselines.
    Compare(commands::compare::Args),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = e.downcast_ref::<Exit>().map_or(1, Exit::code);
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let settings = Settings::load(cli.config.as_deref())?;
    let ctx = commands::Ctx {
        jobs: settings.get("jobs", cli.jobs, 0)?,
        manifest: cli.manifest,
        settings,
    };
    match cli.command {
        Command::Ingest(a) => commands::ingest::run(&ctx, a),
        Command::CurateBlacklist(a) => commands::curate::run(&ctx, a),
        Command::Extract(a) => commands::extract::run(&ctx, a),
        Command::Check(a) => commands::check::run(&ctx, a),
        Command::GenerateText(a) => commands::generate::run(&ctx, a),
        Command::Assemble(a) => commands::assemble::run(&ctx, a),
        Command::Stats(a) => commands::stats::run(&ctx, a),
        Command::Evaluate(a) => commands::evaluate::run(&ctx, a),
        Command::Compare(a) => commands::compare::run(&ctx, a),
    }
}
