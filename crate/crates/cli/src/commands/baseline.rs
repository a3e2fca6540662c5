//! `baseline`: score every fact's candidates with the frequency baselines
//! and write one prediction JSONL per baseline.

use cooc_core::baselines::{predict, write_predictions_jsonl};
use cooc_core::dataset::build_candidate_set;
use cooc_core::Result;

use crate::config::BaselineConfig;
use crate::manifest::ManifestBuilder;
use crate::util::{create_file, finish_file};

pub fn run(cfg: BaselineConfig) -> Result<()> {
    let (dict, store) = super::load_store_dir(&cfg.store)?;
    let facts = super::load_facts(&cfg.dataset)?;
    let vocab_lines = super::candidate_vocab(cfg.mode, &cfg.vocab)?;
    let candidates = build_candidate_set(&facts, cfg.mode, &vocab_lines);

    std::fs::create_dir_all(&cfg.out).map_err(|e| cooc_core::error::io_data(&cfg.out, e))?;

    let mut manifest = ManifestBuilder::new("baseline", &cfg)?;
    manifest.input(&cfg.store.join(super::DICTIONARY_FILE))?;
    manifest.input(&cfg.store.join(super::STORE_FILE))?;
    manifest.input(&cfg.dataset)?;
    if let Some(path) = &cfg.vocab {
        manifest.input(path)?;
    }

    let mut n_unknown = 0usize;
    for &baseline in &cfg.baselines {
        let records = predict(baseline, &facts, &candidates, &dict, &store)?;
        n_unknown = records.iter().filter(|r| r.unknown).count().max(n_unknown);
        let path = cfg.out.join(format!("pred_{}.jsonl", baseline.as_str()));
        let mut w = create_file(&path)?;
        write_predictions_jsonl(&records, &mut w)?;
        finish_file(w, &path)?;
        manifest.output(&path)?;
        eprintln!("{}: scored {} facts", baseline.as_str(), records.len());
    }

    manifest.details(serde_json::json!({
        "n_facts": facts.len(),
        "n_unknown_subject": n_unknown,
    }));
    manifest.write(&cfg.out.join("manifest.json"))
}
