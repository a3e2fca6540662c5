//! `cooc`: document-level co-occurrence statistics for factual-probing
//! analysis. Subcommands cover the whole pipeline: corpus counting,
//! dataset preparation, frequency baselines, evaluation, bias analysis,
//! and debias filtering.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data error,
//! 3 internal invariant violation.

mod commands;
mod config;
mod manifest;
mod perf;
mod util;

use clap::{Parser, Subcommand};

use cooc_core::ErrorKind;

#[derive(Parser)]
#[command(
    name = "cooc",
    version,
    about = "Document-level co-occurrence statistics and factual-probing analysis"
)]
struct Cli {
    /// TOML config file; command-line flags override its values
    #[arg(short, long, global = true, value_name = "FILE")]
    config: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count document-level co-occurrences over JSONL corpus shards
    Count(config::CountArgs),
    /// Validate, split, and render a facts dataset
    Prep(config::PrepArgs),
    /// Score candidates with the frequency baselines
    Baseline(config::BaselineArgs),
    /// Score predictions against gold objects (hits@1, MRR)
    Eval(config::EvalArgs),
    /// Join metrics with co-occurrence statistics into frequency bins
    Analyze(config::AnalyzeArgs),
    /// Filter high-bias train facts from a dataset
    Debias(config::DebiasArgs),
    /// Dump a store's pair counts as TSV
    ExportTsv(config::ExportArgs),
}

fn run(cli: Cli) -> cooc_core::Result<()> {
    let file = config::load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Count(args) => commands::count::run(config::resolve_count(args, file.count)?),
        Command::Prep(args) => commands::prep::run(config::resolve_prep(args, file.prep)?),
        Command::Baseline(args) => {
            commands::baseline::run(config::resolve_baseline(args, file.baseline)?)
        }
        Command::Eval(args) => commands::eval_cmd::run(config::resolve_eval(args, file.eval)?),
        Command::Analyze(args) => {
            commands::analyze::run(config::resolve_analyze(args, file.analyze)?)
        }
        Command::Debias(args) => {
            commands::debias_cmd::run(config::resolve_debias(args, file.debias)?)
        }
        Command::ExportTsv(args) => {
            commands::export::run(config::resolve_export(args, file.export_tsv)?)
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap uses exit code 2 for usage errors; this tool reserves 2
            // for data errors, so usage problems remap to 1
            use clap::error::ErrorKind as ClapKind;
            let code = match e.kind() {
                ClapKind::DisplayHelp | ClapKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(match e.kind() {
            ErrorKind::Usage => 1,
            ErrorKind::Data => 2,
            ErrorKind::Internal => 3,
        });
    }
}
