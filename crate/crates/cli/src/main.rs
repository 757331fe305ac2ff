//! `scorealign` — measure corpus/dataset alignment and evaluate essay
//! scorers from the command line.
//!
//! Exit codes: `0` success, `1` usage error (flags or configuration),
//! `2` data error (missing or invalid input files). Every artifact is
//! written atomically (temp file + rename), so failed runs never leave
//! truncated outputs.

mod commands;
mod config;
mod failure;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use scorealign::lexalign::LogBase;
use scorealign::synprof::Aggregation;
use scorealign::ScoreScale;

#[derive(Parser)]
#[command(
    name = "scorealign",
    version,
    about = "Corpus alignment measurement and essay-scoring evaluation toolkit",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Clean a corpus: drop unscorable, duplicate, too-short, and
    /// non-English documents; print the cleaning report as JSON
    Clean(CleanArgs),
    /// Pairwise vocabulary divergence (Jensen-Shannon) between corpora
    Jsd(JsdArgs),
    /// Most frequent tokens of a corpus
    Topk(TopkArgs),
    /// Syntactic complexity profile of a corpus from its parse trees
    Profile(ProfileArgs),
    /// Deterministic 70/15/15 train/dev/test split
    Split(SplitArgs),
    /// Score-prediction quality: RMSE, QWK, Spearman, Pearson
    Eval(EvalArgs),
    /// Full evaluation pipeline from a TOML config: splits, scoring,
    /// transfer runs, and advantage tables
    Experiment(ExperimentArgs),
    /// Train, adapt, or apply the built-in ridge scorer
    Score(ScoreArgs),
}

fn parse_scale(s: &str) -> Result<ScoreScale, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected MIN:MAX:STEP, got {s:?}"));
    }
    let number = |p: &str| {
        p.trim()
            .parse::<f64>()
            .map_err(|_| format!("{p:?} is not a number"))
    };
    ScoreScale::new(number(parts[0])?, number(parts[1])?, number(parts[2])?)
        .map_err(|e| e.to_string())
}

#[derive(Clone, Copy, ValueEnum)]
enum LogBaseArg {
    /// Natural logarithm (divergence ceiling ln 2)
    Natural,
    /// Base-2 logarithm (divergence ceiling 1 bit)
    Base2,
}

impl From<LogBaseArg> for LogBase {
    fn from(value: LogBaseArg) -> LogBase {
        match value {
            LogBaseArg::Natural => LogBase::Natural,
            LogBaseArg::Base2 => LogBase::Base2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AggArg {
    /// Average each document's indices (every text weighs the same)
    Mean,
    /// Pool unit counts over all documents, then compute indices once
    Pooled,
}

impl From<AggArg> for Aggregation {
    fn from(value: AggArg) -> Aggregation {
        match value {
            AggArg::Mean => Aggregation::MeanOfTexts,
            AggArg::Pooled => Aggregation::Pooled,
        }
    }
}

#[derive(Args)]
struct CleanArgs {
    /// Corpus to clean (.jsonl or .csv)
    #[arg(long)]
    input: PathBuf,
    /// Where to write the cleaned corpus (format from extension)
    #[arg(long)]
    output: PathBuf,
    /// Drop documents shorter than this many characters
    #[arg(long, default_value_t = scorealign::DEFAULT_MIN_CHARS)]
    min_chars: usize,
    /// Validate scores against this scale and drop unscored documents
    #[arg(long, value_parser = parse_scale, value_name = "MIN:MAX:STEP")]
    scale: Option<ScoreScale>,
}

#[derive(Args)]
struct JsdArgs {
    /// Corpora to compare (matrix rows; also columns unless --targets)
    #[arg(required = true, value_name = "CORPUS")]
    corpora: Vec<PathBuf>,
    /// Column corpora, for a rectangular subsets-vs-targets matrix
    #[arg(long, num_args = 1.., value_name = "CORPUS")]
    targets: Vec<PathBuf>,
    /// Drop stopwords before building vocabulary distributions
    #[arg(long)]
    remove_stopwords: bool,
    /// Logarithm base for the divergence
    #[arg(long, value_enum, default_value_t = LogBaseArg::Natural)]
    log_base: LogBaseArg,
    /// Also write the matrix as CSV
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct TopkArgs {
    /// Corpus to count tokens in
    #[arg(long)]
    input: PathBuf,
    /// How many tokens to report
    #[arg(long, default_value_t = 20)]
    k: usize,
    /// Drop stopwords before counting
    #[arg(long)]
    remove_stopwords: bool,
    /// Also write the report as CSV
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ProfileArgs {
    /// Corpus the trees belong to
    #[arg(long)]
    input: PathBuf,
    /// Bracketed parse trees, one file with "#doc <id>" headers
    #[arg(long)]
    trees: PathBuf,
    /// How to combine per-document indices into one corpus row
    #[arg(long, value_enum, default_value_t = AggArg::Mean)]
    agg: AggArg,
    /// Custom tree-pattern file (defaults to the built-in pattern set)
    #[arg(long, value_name = "FILE")]
    patterns: Option<PathBuf>,
    /// Profile only a seeded uniform sample of this many documents
    #[arg(long, value_name = "N")]
    sample: Option<usize>,
    /// Seed for --sample
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Also write the profile row as CSV
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct SplitArgs {
    /// Corpus to split
    #[arg(long)]
    input: PathBuf,
    /// Shuffle seed; same seed, same split
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Keep all documents of an author in the same part
    #[arg(long)]
    group_author: bool,
    /// Where to write the split JSON (stdout when omitted)
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Prediction CSV (header id,pred or id,gold,pred)
    #[arg(long)]
    predictions: PathBuf,
    /// Dataset supplying gold scores for rows without a gold column
    #[arg(long, value_name = "CORPUS")]
    dataset: Option<PathBuf>,
    /// Score scale; required for QWK
    #[arg(long, value_parser = parse_scale, value_name = "MIN:MAX:STEP")]
    scale: Option<ScoreScale>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment description (see the configuration section of --help)
    #[arg(long)]
    config: PathBuf,
    /// Directory for all artifacts
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ScoreArgs {
    #[command(subcommand)]
    command: ScoreCommand,
}

#[derive(Subcommand)]
enum ScoreCommand {
    /// Fit a ridge scorer on a scored corpus
    Train(ScoreTrainArgs),
    /// Refit a trained scorer on a few scored target examples,
    /// staying close to the source weights
    Adapt(ScoreAdaptArgs),
    /// Predict scores for a corpus with a trained scorer
    Predict(ScorePredictArgs),
}

#[derive(Args)]
struct ScoreTrainArgs {
    /// Scored training corpus
    #[arg(long)]
    input: PathBuf,
    /// Scale the corpus scores live on
    #[arg(long, value_parser = parse_scale, value_name = "MIN:MAX:STEP")]
    scale: ScoreScale,
    /// Parse trees for the corpus (enables the syntactic features)
    #[arg(long, value_name = "FILE")]
    trees: Option<PathBuf>,
    /// Ridge regularization strength
    #[arg(long, default_value_t = config::DEFAULT_LAMBDA)]
    lambda: f64,
    /// Where to write the model JSON
    #[arg(long, value_name = "FILE")]
    output: PathBuf,
}

#[derive(Args)]
struct ScoreAdaptArgs {
    /// Trained model to adapt
    #[arg(long, value_name = "FILE")]
    model: PathBuf,
    /// Scored target examples (the few-shot sample)
    #[arg(long)]
    input: PathBuf,
    /// Scale the target scores live on
    #[arg(long, value_parser = parse_scale, value_name = "MIN:MAX:STEP")]
    scale: ScoreScale,
    /// Parse trees for the target examples
    #[arg(long, value_name = "FILE")]
    trees: Option<PathBuf>,
    /// How strongly to stay near the source weights
    #[arg(long, default_value_t = config::DEFAULT_LAMBDA)]
    lambda: f64,
    /// Where to write the adapted model JSON
    #[arg(long, value_name = "FILE")]
    output: PathBuf,
}

#[derive(Args)]
struct ScorePredictArgs {
    /// Trained model
    #[arg(long, value_name = "FILE")]
    model: PathBuf,
    /// Corpus to score
    #[arg(long)]
    input: PathBuf,
    /// Scale to map normalized predictions back onto
    #[arg(long, value_parser = parse_scale, value_name = "MIN:MAX:STEP")]
    scale: ScoreScale,
    /// Parse trees for the corpus
    #[arg(long, value_name = "FILE")]
    trees: Option<PathBuf>,
    /// Where to write the prediction CSV (header id,gold,pred)
    #[arg(long, value_name = "FILE")]
    output: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Clean(args) => commands::clean(args),
        Command::Jsd(args) => commands::jsd(args),
        Command::Topk(args) => commands::topk(args),
        Command::Profile(args) => commands::profile(args),
        Command::Split(args) => commands::split(args),
        Command::Eval(args) => commands::eval(args),
        Command::Experiment(args) => commands::experiment(args),
        Command::Score(args) => match args.command {
            ScoreCommand::Train(args) => commands::score_train(args),
            ScoreCommand::Adapt(args) => commands::score_adapt(args),
            ScoreCommand::Predict(args) => commands::score_predict(args),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
