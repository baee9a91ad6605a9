use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;

use config::{Overrides, RunConfig};

/// Emotion-caption corpus analytics and caption evaluation.
#[derive(Parser)]
#[command(name = "emocap", version)]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for per-utterance work.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output formats: json, csv, text (repeat or comma-separate).
    #[arg(long, global = true)]
    emit: Vec<String>,

    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true)]
    corpus: Option<PathBuf>,

    /// Corpus format (csv or jsonl); guessed from the extension otherwise.
    #[arg(long, global = true)]
    format: Option<String>,

    /// `painting,split` CSV; splits are drawn from the seed otherwise.
    #[arg(long, global = true)]
    split_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a corpus, write its summary and split file.
    Ingest,
    /// Corpus statistics and affect distributions.
    Analyze,
    /// Train and evaluate the naive Bayes emotion classifier, or predict with it.
    Classify(commands::ClassifyArgs),
    /// Score a generations file.
    Eval(commands::EvalArgs),
    /// Inject sentiment adjectives into captions.
    Inject(commands::InjectArgs),
    /// Train the part-of-speech tagger.
    TagTrain(commands::TagTrainArgs),
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Data(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Data(_) => 3,
            Failure::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Data(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<emocap::Error> for Failure {
    fn from(e: emocap::Error) -> Self {
        if e.is_data_error() {
            Failure::Data(e.to_string())
        } else {
            Failure::Config(e.to_string())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = cli.global;
    let over = Overrides {
        corpus: g.corpus,
        format: g.format,
        split_file: g.split_file,
        seed: g.seed,
        workers: g.workers,
        emit: g.emit,
        out_dir: g.out,
    };
    let cfg = RunConfig::resolve(g.config.as_deref(), over)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build_global()
        .map_err(|e| Failure::Internal(format!("thread pool: {e}")))?;
    match cli.cmd {
        Cmd::Ingest => commands::ingest(&cfg),
        Cmd::Analyze => commands::analyze(&cfg),
        Cmd::Classify(a) => commands::classify(&cfg, a),
        Cmd::Eval(a) => commands::eval(&cfg, a),
        Cmd::Inject(a) => commands::inject(&cfg, a),
        Cmd::TagTrain(a) => commands::tag_train(&cfg, a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(f)) => {
            eprintln!("emocap: {}", f.message());
            ExitCode::from(f.code())
        }
        Err(_) => ExitCode::from(4),
    }
}
