//! `analyze`: evaluate predictions, join each fact with its co-occurrence
//! statistics, and write the binned bias reports.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use cooc_core::analysis::{bin_report, write_binned_csv, BinDimension, BIN_SCHEME};
use cooc_core::dataset::{build_alternate_gold_index, build_candidate_set};
use cooc_core::error::io_data;
use cooc_core::eval::{evaluate, per_bin_join, JoinedFact, PredictionSet};
use cooc_core::{Error, Result};

use crate::config::AnalyzeConfig;
use crate::manifest::ManifestBuilder;
use crate::util::{create_file, csv_field, finish_file};

pub fn run(cfg: AnalyzeConfig) -> Result<()> {
    let (dict, store) = super::load_store_dir(&cfg.store)?;
    let facts = super::load_facts(&cfg.dataset)?;
    let file = File::open(&cfg.predictions).map_err(|e| io_data(&cfg.predictions, e))?;
    let predictions = PredictionSet::from_jsonl(BufReader::new(file))
        .map_err(|e| Error::data(format!("reading {}", cfg.predictions.display())).with_source(e))?;
    let vocab_lines = super::candidate_vocab(cfg.mode, &cfg.vocab)?;

    let candidates = build_candidate_set(&facts, cfg.mode, &vocab_lines);
    let alternates = build_alternate_gold_index(&facts);
    let target = super::filter_split(&facts, cfg.split);
    let report = evaluate(&target, &predictions, &candidates, &alternates)?;
    let joined = per_bin_join(&report, &target, &store, &dict, &candidates)?;

    std::fs::create_dir_all(&cfg.out).map_err(|e| io_data(&cfg.out, e))?;

    let condprob_path = cfg.out.join("binned_condprob.csv");
    let condprob = bin_report(&joined, BinDimension::GoldCondProb)?;
    let mut w = create_file(&condprob_path)?;
    write_binned_csv(&condprob, &mut w)?;
    finish_file(w, &condprob_path)?;

    let coocrr_path = cfg.out.join("binned_cooc_rr.csv");
    let coocrr = bin_report(&joined, BinDimension::CoocRr)?;
    let mut w = create_file(&coocrr_path)?;
    write_binned_csv(&coocrr, &mut w)?;
    finish_file(w, &coocrr_path)?;

    let joined_path = cfg.out.join("joined.csv");
    write_joined_csv(&joined, &joined_path)?;

    eprintln!(
        "analyzed {} facts: {} unknown ({:.2}%), hits@1 {:.4}",
        report.overall.n,
        condprob.n_unknown,
        condprob.unknown_fraction() * 100.0,
        report.overall.hits1
    );

    let mut manifest = ManifestBuilder::new("analyze", &cfg)?;
    manifest.bin_scheme(BIN_SCHEME);
    manifest.input(&cfg.predictions)?;
    manifest.input(&cfg.dataset)?;
    manifest.input(&cfg.store.join(super::DICTIONARY_FILE))?;
    manifest.input(&cfg.store.join(super::STORE_FILE))?;
    if let Some(path) = &cfg.vocab {
        manifest.input(path)?;
    }
    manifest.output(&condprob_path)?;
    manifest.output(&coocrr_path)?;
    manifest.output(&joined_path)?;
    manifest.details(serde_json::json!({
        "n_facts": report.overall.n,
        "n_unknown": condprob.n_unknown,
        "unknown_fraction": condprob.unknown_fraction(),
        "hits1": report.overall.hits1,
        "mrr": report.overall.mrr,
    }));
    manifest.write(&cfg.out.join("manifest.json"))
}

/// Per-fact join of metrics and corpus statistics, one row per evaluated
/// fact, sorted by uid (the evaluation report's order).
fn write_joined_csv(joined: &[JoinedFact], path: &Path) -> Result<()> {
    let mut w = create_file(path)?;
    writeln!(
        w,
        "uid,relation_id,hits1,rr,unknown,gold_pair_count,gold_cond_prob,\
         cooc_rr,pred_pair_count,pred_cond_prob,top_pred"
    )
    .map_err(|e| io_data(path, e))?;
    let int = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    let real = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
    for f in joined {
        writeln!(
            w,
            "{},{},{},{:.6},{},{},{},{},{},{},{}",
            f.uid,
            f.relation_id,
            f.hits1 as u8,
            f.rr,
            f.unknown as u8,
            int(f.gold_pair_count),
            real(f.gold_cond_prob),
            real(f.cooc_rr),
            int(f.pred_pair_count),
            real(f.pred_cond_prob),
            csv_field(&f.top_pred)
        )
        .map_err(|e| io_data(path, e))?;
    }
    finish_file(w, path)
}
