use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "fontsense", version, about = "Text-to-font recommendation pipeline")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Filter, aggregate and split a raw annotated corpus.
    Prepare(PrepareArgs),
    /// Train one model per seed and keep the best on dev.
    Train(TrainArgs),
    /// Score models and the majority baseline on a test split.
    Eval(EvalArgs),
    /// Rebalance a training split with back-translation.
    Augment(AugmentArgs),
    /// Correlations and corpus statistics.
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
    /// Print a recommendation for one text as JSON.
    Recommend(RecommendArgs),
    /// Serve recommendations over HTTP.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FeatureKind {
    Nrc,
    Wordvec,
    External,
}

#[derive(Debug, Clone, Default, Args)]
pub struct FeatureArgs {
    /// Feature provider. Defaults to the one recorded in the model, if any.
    #[arg(long = "features", value_enum)]
    pub kind: Option<FeatureKind>,
    /// Directory with emotion.tsv, intensity.tsv, vad.tsv and optional synonyms.tsv.
    #[arg(long)]
    pub lexicons: Option<PathBuf>,
    /// Word vectors in text format.
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    /// Precomputed sentence vectors, JSON lines `{"id", "vec"}`.
    #[arg(long = "external-vecs")]
    pub external_vecs: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CatalogArgs {
    /// Font catalog JSON. Defaults to the built-in ten fonts.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SlotPolicyArg {
    First,
    Any,
}

#[derive(Debug, Args)]
pub struct PrepareArgs {
    /// Raw corpus, JSON lines.
    #[arg(long)]
    pub data: PathBuf,
    #[command(flatten)]
    pub catalog: CatalogArgs,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, default_value = "prepared")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 6)]
    pub min_annotations: usize,
    /// Drop annotators whose modal choice fraction exceeds this.
    #[arg(long, default_value_t = 0.9)]
    pub same_choice_threshold: f64,
    #[arg(long, value_enum, default_value = "first")]
    pub slot_policy: SlotPolicyArg,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub dev: Option<PathBuf>,
    #[command(flatten)]
    pub features: FeatureArgs,
    /// First seed; runs use `seed`, `seed + 1`, ...
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub runs: u64,
    #[arg(long, default_value_t = 100)]
    pub epochs: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub lr: f64,
    #[arg(long, default_value_t = 16)]
    pub batch_size: usize,
    #[arg(long, default_value_t = 64)]
    pub hidden: usize,
    /// Best checkpoint; per-seed checkpoints and the log are written beside it.
    #[arg(long, default_value = "model.json")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Training split, used to fit the majority baseline.
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    /// Checkpoint(s); metrics are averaged over all of them.
    #[arg(long = "model", required = true)]
    pub models: Vec<PathBuf>,
    #[command(flatten)]
    pub features: FeatureArgs,
    /// Row label for the model. Defaults to the featurizer name.
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long, conflicts_with_all = ["json", "format"])]
    pub csv: bool,
    #[arg(long, conflicts_with = "format")]
    pub json: bool,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

impl EvalArgs {
    pub fn output_format(&self) -> OutputFormat {
        if self.csv {
            OutputFormat::Csv
        } else if self.json {
            OutputFormat::Json
        } else {
            self.format.unwrap_or(OutputFormat::Table)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProviderKind {
    /// Offline synonym-substitution round trips.
    Mock,
    /// Round trips that return the input unchanged.
    Identity,
    /// Remote service at FONTSENSE_MT_URL.
    Http,
}

#[derive(Debug, Args)]
pub struct AugmentArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "mock")]
    pub provider: ProviderKind,
    /// Synonym table for the mock provider.
    #[arg(long)]
    pub synonyms: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "de,fr,es,ja")]
    pub langs: Vec<String>,
    #[arg(long, default_value_t = 0.3)]
    pub rarity_threshold: f64,
    #[arg(long, default_value_t = 170)]
    pub cap: usize,
    #[arg(long, default_value_t = 50)]
    pub undersample: usize,
}

#[derive(Debug, Subcommand)]
pub enum AnalyzeCommand {
    /// Pearson correlation between font mass and each feature dimension.
    Corr(CorrArgs),
    /// Token and label statistics for a labeled corpus.
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
pub struct CorrArgs {
    /// Labeled corpus, JSON lines.
    #[arg(long)]
    pub data: PathBuf,
    #[command(flatten)]
    pub features: FeatureArgs,
    #[command(flatten)]
    pub catalog: CatalogArgs,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Labeled corpus, JSON lines.
    #[arg(long)]
    pub data: PathBuf,
    /// Raw corpus, for agreement statistics.
    #[arg(long)]
    pub raw: Option<PathBuf>,
    #[command(flatten)]
    pub catalog: CatalogArgs,
}

#[derive(Debug, Args)]
pub struct RecommendArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub text: String,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[command(flatten)]
    pub features: FeatureArgs,
    #[command(flatten)]
    pub catalog: CatalogArgs,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    /// Allowed browser origin; repeatable.
    #[arg(long = "cors-origin")]
    pub cors_origins: Vec<String>,
    #[command(flatten)]
    pub features: FeatureArgs,
    #[command(flatten)]
    pub catalog: CatalogArgs,
}
