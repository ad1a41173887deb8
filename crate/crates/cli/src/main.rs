mod commands;
mod config;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Deontic modality extraction from contracts: ingestion, rule-based
/// extraction, annotation merging, statistics and evaluation.
#[derive(Debug, Parser)]
#[command(name = "deontic", version)]
pub struct Cli {
    /// Pipeline configuration (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for artifacts and manifests.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// HTML contracts to provisions and sentences.
    Ingest {
        /// HTML files or directories holding them.
        #[arg(long, required = true, num_args = 1..)]
        html: Vec<PathBuf>,
        /// Completeness sidecar (JSONL of provision_key, complete).
        #[arg(long)]
        completeness: Option<PathBuf>,
    },
    /// Agent aliases from the contract headers.
    Aliases {
        #[arg(long)]
        provisions: Option<PathBuf>,
        /// Entity sidecar (JSONL of mentions); capitalised runs otherwise.
        #[arg(long)]
        entities: Option<PathBuf>,
    },
    /// Contract type from the title provisions.
    ContractType {
        #[arg(long)]
        provisions: Option<PathBuf>,
    },
    /// Validates CoNLL-U parses and checks them against the sentences.
    ParseImport {
        #[arg(long)]
        conllu: PathBuf,
        #[arg(long)]
        sentences: Option<PathBuf>,
    },
    /// Rule-based predictions from parsed sentences.
    Extract {
        #[arg(long)]
        sentences: Option<PathBuf>,
        #[arg(long)]
        aliases: Option<PathBuf>,
        #[arg(long)]
        parses: Option<PathBuf>,
    },
    /// Majority baselines.
    Baseline {
        #[command(subcommand)]
        kind: BaselineKind,
    },
    /// Majority vote over three annotations per (sentence, agent).
    MergeAnnotations {
        #[arg(long)]
        input: PathBuf,
    },
    /// Krippendorff's alpha for types and tokens.
    Agreement {
        #[arg(long)]
        input: PathBuf,
    },
    /// Assigns whole contracts to train/dev/test.
    Split {
        #[arg(long)]
        input: PathBuf,
    },
    /// Corpus statistics and tables.
    Stats {
        #[arg(long, required = true, num_args = 1..)]
        input: Vec<PathBuf>,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Model-ready records with agent conditioning and anonymisation.
    Export {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        conditioning: Option<ConditioningArg>,
        #[arg(long, value_enum)]
        anonymize: Option<AnonymizeArg>,
    },
    /// Foreign corpus files to annotation records through a field mapping.
    Import {
        /// JSON array or JSONL.
        #[arg(long)]
        input: PathBuf,
        /// TOML field mapping.
        #[arg(long)]
        mapping: Option<PathBuf>,
    },
    /// Scores predictions against gold records.
    Evaluate {
        #[command(subcommand)]
        kind: EvalKind,
    },
    /// Binary red-flag scores.
    RedflagEval {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum BaselineKind {
    /// The train-split majority label per agent group.
    MajorityCls {
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        input: PathBuf,
    },
    /// Tags every `shall` with the group's type.
    MajoritySpan {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct EvalFiles {
    #[arg(long)]
    pub pred: Option<PathBuf>,
    #[arg(long)]
    pub gold: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum EvalKind {
    Cls {
        #[command(flatten)]
        files: EvalFiles,
    },
    /// Labeled and unlabeled scores; both when neither flag is given.
    Span {
        #[command(flatten)]
        files: EvalFiles,
        #[arg(long)]
        labeled: bool,
        #[arg(long)]
        unlabeled: bool,
        /// Average over all six types instead of the supported ones.
        #[arg(long)]
        all_types: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ConditioningArg {
    AgentToken,
    None,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AnonymizeArg {
    Off,
    Consistent,
    Random,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = matches!(e.downcast_ref::<deontic_core::Error>(), Some(deontic_core::Error::Usage(_)));
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
