//! `debias`: discard the highest-bias (or a random control sample of)
//! train facts per relation and write the filtered dataset.

use cooc_core::dataset::{write_facts_jsonl, Split};
use cooc_core::debias::{filter, write_discard_csv};
use cooc_core::error::io_data;
use cooc_core::Result;

use crate::config::DebiasConfig;
use crate::manifest::ManifestBuilder;
use crate::util::{create_file, finish_file};

pub fn run(cfg: DebiasConfig) -> Result<()> {
    let (dict, store) = super::load_store_dir(&cfg.store)?;
    let facts = super::load_facts(&cfg.dataset)?;

    let outcome = filter(&facts, cfg.filter_strategy, cfg.ratio, cfg.seed, &dict, &store)?;

    std::fs::create_dir_all(&cfg.out).map_err(|e| io_data(&cfg.out, e))?;
    let dataset_path = cfg.out.join("dataset.jsonl");
    let mut w = create_file(&dataset_path)?;
    write_facts_jsonl(&outcome.kept, &mut w)?;
    finish_file(w, &dataset_path)?;

    let discard_path = cfg.out.join("discarded.csv");
    let mut w = create_file(&discard_path)?;
    write_discard_csv(&outcome, cfg.filter_strategy, cfg.seed, &mut w)?;
    finish_file(w, &discard_path)?;

    let n_train_kept =
        outcome.kept.iter().filter(|f| f.split == Split::Train).count();
    eprintln!(
        "kept {} facts ({} train), discarded {}",
        outcome.kept.len(),
        n_train_kept,
        outcome.discarded.len()
    );

    let mut manifest = ManifestBuilder::new("debias", &cfg)?;
    manifest.input(&cfg.dataset)?;
    manifest.input(&cfg.store.join(super::DICTIONARY_FILE))?;
    manifest.input(&cfg.store.join(super::STORE_FILE))?;
    manifest.output(&dataset_path)?;
    manifest.output(&discard_path)?;
    manifest.details(serde_json::json!({
        "n_input": facts.len(),
        "n_kept": outcome.kept.len(),
        "n_train_kept": n_train_kept,
        "n_discarded": outcome.discarded.len(),
    }));
    manifest.write(&cfg.out.join("manifest.json"))
}
