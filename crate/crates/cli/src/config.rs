//! Per-subcommand configuration: clap flags overlaid on an optional TOML
//! file. Flags win. Resolved configs serialize into the run manifest.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use cooc_core::baselines::Baseline;
use cooc_core::dataset::{CandidateMode, Split};
use cooc_core::debias::FilterStrategy;
use cooc_core::{Error, Result};

/// Which split of the dataset a command operates on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitFilter {
    Train,
    Test,
    All,
}

impl SplitFilter {
    pub fn keeps(self, split: Split) -> bool {
        match self {
            SplitFilter::Train => split == Split::Train,
            SplitFilter::Test => split == Split::Test,
            SplitFilter::All => true,
        }
    }
}

impl std::str::FromStr for SplitFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(SplitFilter::Train),
            "test" => Ok(SplitFilter::Test),
            "all" => Ok(SplitFilter::All),
            other => Err(Error::usage(format!("unknown split {other:?} (train|test|all)"))),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub count: CountSection,
    #[serde(default)]
    pub prep: PrepSection,
    #[serde(default)]
    pub baseline: BaselineSection,
    #[serde(default)]
    pub eval: EvalSection,
    #[serde(default)]
    pub analyze: AnalyzeSection,
    #[serde(default)]
    pub debias: DebiasSection,
    #[serde(default, rename = "export-tsv")]
    pub export_tsv: ExportSection,
}

pub fn load_config(path: Option<&Path>) -> Result<ConfigFile> {
    let Some(path) = path else {
        return Ok(ConfigFile::default());
    };
    let raw = std::fs::read_to_string(path)
        .map_err(|e| Error::usage(format!("config {}", path.display())).with_source(e))?;
    toml::from_str(&raw)
        .map_err(|e| Error::usage(format!("config {}", path.display())).with_source(e))
}

fn require<T>(flag: Option<T>, file: Option<T>, section: &str, name: &str) -> Result<T> {
    flag.or(file).ok_or_else(|| {
        Error::usage(format!("missing --{name} (or `{name}` under [{section}] in the config file)"))
    })
}

// count

#[derive(Debug, Clone, Default, Args)]
pub struct CountArgs {
    /// Corpus shard files or directories of *.jsonl files
    #[arg(long, value_name = "PATH", num_args = 1..)]
    pub corpus: Vec<PathBuf>,
    /// Subject surface forms, one per line
    #[arg(long, value_name = "FILE")]
    pub subjects: Option<PathBuf>,
    /// Candidate vocabulary, one word per line
    #[arg(long, value_name = "FILE")]
    pub vocab: Option<PathBuf>,
    /// Store directory to create
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Worker threads for shard counting
    #[arg(long, value_name = "N")]
    pub workers: Option<usize>,
    /// Recount every shard, ignoring cached shard files
    #[arg(long)]
    pub fresh: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct CountSection {
    pub corpus: Option<Vec<PathBuf>>,
    pub subjects: Option<PathBuf>,
    pub vocab: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub fresh: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct CountConfig {
    pub corpus: Vec<PathBuf>,
    pub subjects: PathBuf,
    pub vocab: PathBuf,
    pub out: PathBuf,
    pub workers: usize,
    pub fresh: bool,
}

pub fn resolve_count(args: CountArgs, file: CountSection) -> Result<CountConfig> {
    let corpus = if args.corpus.is_empty() { file.corpus } else { Some(args.corpus) };
    let workers = args.workers.or(file.workers).unwrap_or(1);
    if workers == 0 {
        return Err(Error::usage("--workers must be at least 1"));
    }
    Ok(CountConfig {
        corpus: require(corpus, None, "count", "corpus")?,
        subjects: require(args.subjects, file.subjects, "count", "subjects")?,
        vocab: require(args.vocab, file.vocab, "count", "vocab")?,
        out: require(args.out, file.out, "count", "out")?,
        workers,
        fresh: args.fresh || file.fresh.unwrap_or(false),
    })
}

// prep

#[derive(Debug, Clone, Default, Args)]
pub struct PrepArgs {
    /// Raw facts JSONL (subject, relation_id, object per line)
    #[arg(long, value_name = "FILE")]
    pub facts: Option<PathBuf>,
    /// Model vocabulary files; objects must appear in every one
    #[arg(long, value_name = "FILE", num_args = 1..)]
    pub vocab: Vec<PathBuf>,
    /// Relation templates JSONL; defaults to the bundled set
    #[arg(long, value_name = "FILE")]
    pub templates: Option<PathBuf>,
    /// Fraction of each relation assigned to the train split
    #[arg(long, value_name = "RATIO")]
    pub train_ratio: Option<f64>,
    /// Split shuffle seed
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct PrepSection {
    pub facts: Option<PathBuf>,
    pub vocab: Option<Vec<PathBuf>>,
    pub templates: Option<PathBuf>,
    pub train_ratio: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct PrepConfig {
    pub facts: PathBuf,
    pub vocab: Vec<PathBuf>,
    pub templates: Option<PathBuf>,
    pub train_ratio: f64,
    pub seed: u64,
    pub out: PathBuf,
}

pub fn resolve_prep(args: PrepArgs, file: PrepSection) -> Result<PrepConfig> {
    let vocab = if args.vocab.is_empty() { file.vocab } else { Some(args.vocab) };
    Ok(PrepConfig {
        facts: require(args.facts, file.facts, "prep", "facts")?,
        vocab: require(vocab, None, "prep", "vocab")?,
        templates: args.templates.or(file.templates),
        train_ratio: args.train_ratio.or(file.train_ratio).unwrap_or(0.7),
        seed: args.seed.or(file.seed).unwrap_or(0),
        out: require(args.out, file.out, "prep", "out")?,
    })
}

// baseline

#[derive(Debug, Clone, Default, Args)]
pub struct BaselineArgs {
    /// Store directory produced by `count`
    #[arg(long, value_name = "DIR")]
    pub store: Option<PathBuf>,
    /// Dataset JSONL produced by `prep`
    #[arg(long, value_name = "FILE")]
    pub dataset: Option<PathBuf>,
    /// Candidate restriction: remove-stopwords | gold-objects | gold-objects-relation-wise
    #[arg(long, value_name = "MODE")]
    pub candidates: Option<CandidateMode>,
    /// Vocabulary file (required by remove-stopwords)
    #[arg(long, value_name = "FILE")]
    pub vocab: Option<PathBuf>,
    /// Baselines to run
    #[arg(long, value_name = "NAME", value_delimiter = ',', num_args = 1..)]
    pub which: Vec<Baseline>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct BaselineSection {
    pub store: Option<PathBuf>,
    pub dataset: Option<PathBuf>,
    pub candidates: Option<String>,
    pub vocab: Option<PathBuf>,
    pub which: Option<Vec<String>>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct BaselineConfig {
    pub store: PathBuf,
    pub dataset: PathBuf,
    pub candidates: String,
    pub vocab: Option<PathBuf>,
    pub which: Vec<String>,
    pub out: PathBuf,
    #[serde(skip)]
    pub mode: CandidateMode,
    #[serde(skip)]
    pub baselines: Vec<Baseline>,
}

pub fn resolve_baseline(args: BaselineArgs, file: BaselineSection) -> Result<BaselineConfig> {
    let mode = match (args.candidates, file.candidates) {
        (Some(m), _) => m,
        (None, Some(s)) => s.parse()?,
        (None, None) => CandidateMode::GoldObjects,
    };
    let baselines: Vec<Baseline> = if !args.which.is_empty() {
        args.which
    } else if let Some(names) = file.which {
        names.iter().map(|n| n.parse()).collect::<Result<_>>()?
    } else {
        cooc_core::baselines::ALL_BASELINES.to_vec()
    };
    let mut seen = Vec::new();
    for b in baselines {
        if !seen.contains(&b) {
            seen.push(b);
        }
    }
    Ok(BaselineConfig {
        store: require(args.store, file.store, "baseline", "store")?,
        dataset: require(args.dataset, file.dataset, "baseline", "dataset")?,
        candidates: mode.as_str().to_string(),
        vocab: args.vocab.or(file.vocab),
        which: seen.iter().map(|b| b.as_str().to_string()).collect(),
        out: require(args.out, file.out, "baseline", "out")?,
        mode,
        baselines: seen,
    })
}

// eval

#[derive(Debug, Clone, Default, Args)]
pub struct EvalArgs {
    /// Prediction JSONL ({"uid", "scores": {...}} or {"uid", "ranking": [...]})
    #[arg(long, value_name = "FILE")]
    pub predictions: Option<PathBuf>,
    /// Dataset JSONL produced by `prep`
    #[arg(long, value_name = "FILE")]
    pub dataset: Option<PathBuf>,
    /// Candidate restriction mode
    #[arg(long, value_name = "MODE")]
    pub candidates: Option<CandidateMode>,
    /// Vocabulary file (required by remove-stopwords)
    #[arg(long, value_name = "FILE")]
    pub vocab: Option<PathBuf>,
    /// Which facts to score: train | test | all
    #[arg(long, value_name = "SPLIT")]
    pub split: Option<SplitFilter>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct EvalSection {
    pub predictions: Option<PathBuf>,
    pub dataset: Option<PathBuf>,
    pub candidates: Option<String>,
    pub vocab: Option<PathBuf>,
    pub split: Option<SplitFilter>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct EvalConfig {
    pub predictions: PathBuf,
    pub dataset: PathBuf,
    pub candidates: String,
    pub vocab: Option<PathBuf>,
    pub split: SplitFilter,
    pub out: PathBuf,
    #[serde(skip)]
    pub mode: CandidateMode,
}

pub fn resolve_eval(args: EvalArgs, file: EvalSection) -> Result<EvalConfig> {
    let mode = match (args.candidates, file.candidates) {
        (Some(m), _) => m,
        (None, Some(s)) => s.parse()?,
        (None, None) => CandidateMode::GoldObjects,
    };
    Ok(EvalConfig {
        predictions: require(args.predictions, file.predictions, "eval", "predictions")?,
        dataset: require(args.dataset, file.dataset, "eval", "dataset")?,
        candidates: mode.as_str().to_string(),
        vocab: args.vocab.or(file.vocab),
        split: args.split.or(file.split).unwrap_or(SplitFilter::Test),
        out: require(args.out, file.out, "eval", "out")?,
        mode,
    })
}

// analyze

#[derive(Debug, Clone, Default, Args)]
pub struct AnalyzeArgs {
    /// Prediction JSONL
    #[arg(long, value_name = "FILE")]
    pub predictions: Option<PathBuf>,
    /// Dataset JSONL produced by `prep`
    #[arg(long, value_name = "FILE")]
    pub dataset: Option<PathBuf>,
    /// Store directory produced by `count`
    #[arg(long, value_name = "DIR")]
    pub store: Option<PathBuf>,
    /// Candidate restriction mode
    #[arg(long, value_name = "MODE")]
    pub candidates: Option<CandidateMode>,
    /// Vocabulary file (required by remove-stopwords)
    #[arg(long, value_name = "FILE")]
    pub vocab: Option<PathBuf>,
    /// Which facts to analyze: train | test | all
    #[arg(long, value_name = "SPLIT")]
    pub split: Option<SplitFilter>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct AnalyzeSection {
    pub predictions: Option<PathBuf>,
    pub dataset: Option<PathBuf>,
    pub store: Option<PathBuf>,
    pub candidates: Option<String>,
    pub vocab: Option<PathBuf>,
    pub split: Option<SplitFilter>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeConfig {
    pub predictions: PathBuf,
    pub dataset: PathBuf,
    pub store: PathBuf,
    pub candidates: String,
    pub vocab: Option<PathBuf>,
    pub split: SplitFilter,
    pub out: PathBuf,
    #[serde(skip)]
    pub mode: CandidateMode,
}

pub fn resolve_analyze(args: AnalyzeArgs, file: AnalyzeSection) -> Result<AnalyzeConfig> {
    let mode = match (args.candidates, file.candidates) {
        (Some(m), _) => m,
        (None, Some(s)) => s.parse()?,
        (None, None) => CandidateMode::GoldObjects,
    };
    Ok(AnalyzeConfig {
        predictions: require(args.predictions, file.predictions, "analyze", "predictions")?,
        dataset: require(args.dataset, file.dataset, "analyze", "dataset")?,
        store: require(args.store, file.store, "analyze", "store")?,
        candidates: mode.as_str().to_string(),
        vocab: args.vocab.or(file.vocab),
        split: args.split.or(file.split).unwrap_or(SplitFilter::Test),
        out: require(args.out, file.out, "analyze", "out")?,
        mode,
    })
}

// debias

#[derive(Debug, Clone, Default, Args)]
pub struct DebiasArgs {
    /// Dataset JSONL produced by `prep`
    #[arg(long, value_name = "FILE")]
    pub dataset: Option<PathBuf>,
    /// Store directory produced by `count`
    #[arg(long, value_name = "DIR")]
    pub store: Option<PathBuf>,
    /// Filter strategy: bias-score | random
    #[arg(long, value_name = "NAME")]
    pub strategy: Option<FilterStrategy>,
    /// Fraction of each relation's train facts to discard, in [0, 1)
    #[arg(long, value_name = "RATIO")]
    pub ratio: Option<f64>,
    /// Sampling seed (random strategy)
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct DebiasSection {
    pub dataset: Option<PathBuf>,
    pub store: Option<PathBuf>,
    pub strategy: Option<String>,
    pub ratio: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct DebiasConfig {
    pub dataset: PathBuf,
    pub store: PathBuf,
    pub strategy: String,
    pub ratio: f64,
    pub seed: u64,
    pub out: PathBuf,
    #[serde(skip)]
    pub filter_strategy: FilterStrategy,
}

pub fn resolve_debias(args: DebiasArgs, file: DebiasSection) -> Result<DebiasConfig> {
    let strategy = match (args.strategy, file.strategy) {
        (Some(s), _) => s,
        (None, Some(s)) => s.parse()?,
        (None, None) => return Err(Error::usage("missing --strategy (bias-score|random)")),
    };
    Ok(DebiasConfig {
        dataset: require(args.dataset, file.dataset, "debias", "dataset")?,
        store: require(args.store, file.store, "debias", "store")?,
        strategy: strategy.as_str().to_string(),
        ratio: require(args.ratio, file.ratio, "debias", "ratio")?,
        seed: args.seed.or(file.seed).unwrap_or(0),
        out: require(args.out, file.out, "debias", "out")?,
        filter_strategy: strategy,
    })
}

// export-tsv

#[derive(Debug, Clone, Default, Args)]
pub struct ExportArgs {
    /// Store directory produced by `count`
    #[arg(long, value_name = "DIR")]
    pub store: Option<PathBuf>,
    /// TSV file to write; a manifest lands next to it
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ExportSection {
    pub store: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct ExportConfig {
    pub store: PathBuf,
    pub out: PathBuf,
}

pub fn resolve_export(args: ExportArgs, file: ExportSection) -> Result<ExportConfig> {
    Ok(ExportConfig {
        store: require(args.store, file.store, "export-tsv", "store")?,
        out: require(args.out, file.out, "export-tsv", "out")?,
    })
}
