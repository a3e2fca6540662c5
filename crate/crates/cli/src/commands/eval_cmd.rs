//! `eval`: rank predictions against gold objects and write per-fact and
//! per-relation metric CSVs.

use std::fs::File;
use std::io::BufReader;

use cooc_core::dataset::{build_alternate_gold_index, build_candidate_set};
use cooc_core::error::io_data;
use cooc_core::eval::{evaluate, write_results_csv, write_summary_csv, PredictionSet};
use cooc_core::{Error, Result};

use crate::config::EvalConfig;
use crate::manifest::ManifestBuilder;
use crate::util::{create_file, finish_file};

pub fn run(cfg: EvalConfig) -> Result<()> {
    let facts = super::load_facts(&cfg.dataset)?;
    let file = File::open(&cfg.predictions).map_err(|e| io_data(&cfg.predictions, e))?;
    let predictions = PredictionSet::from_jsonl(BufReader::new(file))
        .map_err(|e| Error::data(format!("reading {}", cfg.predictions.display())).with_source(e))?;
    let vocab_lines = super::candidate_vocab(cfg.mode, &cfg.vocab)?;

    // candidates and alternate golds always come from the full dataset so
    // token ids and removal sets do not depend on the evaluated split
    let candidates = build_candidate_set(&facts, cfg.mode, &vocab_lines);
    let alternates = build_alternate_gold_index(&facts);
    let target = super::filter_split(&facts, cfg.split);
    let report = evaluate(&target, &predictions, &candidates, &alternates)?;

    std::fs::create_dir_all(&cfg.out).map_err(|e| io_data(&cfg.out, e))?;
    let results_path = cfg.out.join("results.csv");
    let mut w = create_file(&results_path)?;
    write_results_csv(&report, &mut w)?;
    finish_file(w, &results_path)?;

    let summary_path = cfg.out.join("summary.csv");
    let mut w = create_file(&summary_path)?;
    write_summary_csv(&report, &mut w)?;
    finish_file(w, &summary_path)?;

    eprintln!(
        "{} facts: hits@1 {:.4}, MRR {:.4}",
        report.overall.n, report.overall.hits1, report.overall.mrr
    );

    let mut manifest = ManifestBuilder::new("eval", &cfg)?;
    manifest.input(&cfg.predictions)?;
    manifest.input(&cfg.dataset)?;
    if let Some(path) = &cfg.vocab {
        manifest.input(path)?;
    }
    manifest.output(&results_path)?;
    manifest.output(&summary_path)?;
    manifest.details(serde_json::json!({
        "n_facts": report.overall.n,
        "hits1": report.overall.hits1,
        "mrr": report.overall.mrr,
    }));
    manifest.write(&cfg.out.join("manifest.json"))
}
