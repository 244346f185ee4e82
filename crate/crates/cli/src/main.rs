//! `aqa`: analyze Arabic factoid questions, render logic forms, retrieve
//! passages, build and validate the question-text corpus, and evaluate runs.
//!
//! Exit codes: 0 success, 1 I/O or configuration, 2 linguistic failure,
//! 3 search provider failure.

mod commands;
mod config;
mod error;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use aqa_core::{Domain, Source};
use clap::{Args, Parser, Subcommand};
use tracing_subscriber::EnvFilter;

use crate::config::Config;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "aqa", version, about = "Arabic factoid QA corpus pipeline")]
struct Cli {
    /// Configuration file (`key = value` lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Serve search results and pages from this fixture directory.
    #[arg(long, global = true)]
    fixtures: Option<PathBuf>,
    /// Number of search results to fetch per question.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_results: Option<u64>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct QuestionInput {
    /// A question file (JSON lines or one question per line) or a question string.
    input: String,
    /// Source recorded for a question given on the command line.
    #[arg(long, default_value = "FORUM")]
    source: Source,
    /// Domain recorded for a question given on the command line.
    #[arg(long, default_value = "WORLD_NEWS")]
    domain: Domain,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print keywords, focus, answer type and declarative form per question.
    Analyze(QuestionInput),
    /// Print the logic form of each question.
    Logic(QuestionInput),
    /// Print ranked passages for one question, one JSON object per line.
    Retrieve(QuestionInput),
    #[command(subcommand)]
    Corpus(CorpusCommand),
    /// Score a corpus file, or raw counts.
    Eval(EvalArgs),
}

#[derive(Debug, Subcommand)]
enum CorpusCommand {
    /// Analyze, retrieve and validate every question in a file.
    Build { questions: PathBuf },
    /// Re-check unanswered entries against their stored passages.
    Validate {
        corpus: PathBuf,
        /// Ask on the terminal about entries that have no gold answer.
        #[arg(long)]
        interactive: bool,
    },
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Corpus file to score.
    #[arg(required_unless_present = "tq")]
    corpus: Option<PathBuf>,
    /// Gold logic forms, `question_id<TAB>rendered form` per line.
    #[arg(long)]
    gold: Option<PathBuf>,
    /// Total questions; scores the given counts instead of a corpus.
    #[arg(long, conflicts_with_all = ["corpus", "gold"])]
    tq: Option<u64>,
    /// Correctly transformed logic forms.
    #[arg(long, requires = "tq")]
    ct: Option<u64>,
    /// Correct answers.
    #[arg(long, requires = "tq")]
    ca: Option<u64>,
    /// Unanswered questions.
    #[arg(long, requires = "tq", default_value_t = 0)]
    uq: u64,
}

fn config_for(cli: &Cli) -> Result<Config, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(dir) = &cli.fixtures {
        cfg.search_endpoint = Some(config::Endpoint::Fixture(dir.clone()));
    }
    if let Some(n) = cli.max_results {
        cfg.max_results = n as usize;
    }
    cfg.check()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = config_for(&cli)?;
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Analyze(q) => commands::analyze(&cfg, &input::load(&q.input, q.source, q.domain)?, out),
        Command::Logic(q) => {
            let questions = input::load(&q.input, q.source, q.domain)?;
            commands::logic(&cfg, &questions, input::is_file(&q.input), out)
        }
        Command::Retrieve(q) => commands::retrieve(&cfg, &input::load(&q.input, q.source, q.domain)?, out),
        Command::Corpus(CorpusCommand::Build { questions }) => commands::corpus_build(&cfg, questions, out),
        Command::Corpus(CorpusCommand::Validate { corpus, interactive }) => {
            commands::corpus_validate(corpus, *interactive, out)
        }
        Command::Eval(args) => match args.tq {
            Some(tq) => commands::eval_counts(tq, args.ct, args.ca, args.uq, out),
            None => commands::eval_corpus(
                args.corpus.as_deref().expect("clap requires corpus without --tq"),
                args.gold.as_deref(),
                out,
            ),
        },
    }
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_env("AQA_LOG").unwrap_or_else(|_| EnvFilter::new("warn")))
        .with_writer(std::io::stderr)
        .with_target(false)
        .without_time()
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("aqa: {e}");
            e.exit_code()
        }
    }
}
