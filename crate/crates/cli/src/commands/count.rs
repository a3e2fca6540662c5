//! `count`: build the dictionary, count each corpus shard, merge, write
//! the store directory. Shard results are cached by content hash, so an
//! interrupted run resumes where it stopped.

use std::io::Write;
use std::path::{Path, PathBuf};

use cooc_core::dictionary::{build_dictionary, EntityDictionary};
use cooc_core::error::io_data;
use cooc_core::hashing::sha256_file;
use cooc_core::store::CooccurrenceStore;
use cooc_core::{Error, Result};

use crate::config::CountConfig;
use crate::manifest::ManifestBuilder;
use crate::perf;
use crate::util::{create_file, csv_field, finish_file, read_surface_lines};

struct ShardResult {
    source: PathBuf,
    source_hash: String,
    shard_rel: String,
    bytes: u64,
    n_docs: u64,
    skipped: u64,
    store: CooccurrenceStore,
}

pub fn run(cfg: CountConfig) -> Result<()> {
    let sources = expand_corpus(&cfg.corpus)?;
    let subjects = read_surface_lines(&cfg.subjects)?;
    let words = read_surface_lines(&cfg.vocab)?;
    let (dict, exclusions) = build_dictionary(&subjects, &words)?;

    let shards_dir = cfg.out.join("shards");
    std::fs::create_dir_all(&shards_dir).map_err(|e| io_data(&shards_dir, e))?;

    let dict_path = cfg.out.join(super::DICTIONARY_FILE);
    std::fs::write(&dict_path, dict.to_json()).map_err(|e| io_data(&dict_path, e))?;

    let excl_path = cfg.out.join("exclusions.csv");
    let mut w = create_file(&excl_path)?;
    writeln!(w, "kind,surface,reason").map_err(|e| io_data(&excl_path, e))?;
    for e in &exclusions {
        writeln!(w, "{},{},{}", e.kind.as_str(), csv_field(&e.surface), csv_field(&e.reason.to_string()))
            .map_err(|err| io_data(&excl_path, err))?;
    }
    finish_file(w, &excl_path)?;

    let phase = perf::start("count");
    let results = count_shards(&sources, &dict, &cfg, &shards_dir)?;

    let merged = CooccurrenceStore::merge(results.iter().map(|r| r.store.clone()))?;
    let store_path = cfg.out.join(super::STORE_FILE);
    merged.write_file(&store_path)?;

    let total_bytes: u64 = results.iter().map(|r| r.bytes).sum();
    phase.report(total_bytes, cfg.workers);
    eprintln!(
        "counted {} docs ({} skipped) across {} shards",
        merged.n_docs(),
        merged.skipped(),
        results.len()
    );

    let mut manifest = ManifestBuilder::new("count", &cfg)?;
    manifest.input(&cfg.subjects)?;
    manifest.input(&cfg.vocab)?;
    for r in &results {
        manifest.input_hashed(&r.source, r.source_hash.clone());
    }
    manifest.output(&dict_path)?;
    manifest.output(&excl_path)?;
    manifest.output(&store_path)?;
    for r in &results {
        manifest.output(&cfg.out.join(&r.shard_rel))?;
    }
    manifest.details(serde_json::json!({
        "dictionary_hash": dict.hash(),
        "n_subjects": dict.n_subjects(),
        "n_words": dict.n_words(),
        "n_excluded_entries": exclusions.len(),
        "n_docs": merged.n_docs(),
        "n_skipped": merged.skipped(),
        "shards": results.iter().map(|r| serde_json::json!({
            "source": r.source.display().to_string(),
            "source_sha256": r.source_hash,
            "shard": r.shard_rel,
            "n_docs": r.n_docs,
            "skipped": r.skipped,
        })).collect::<Vec<_>>(),
    }));
    manifest.write(&cfg.out.join("manifest.json"))
}

/// Expands files and directories into a sorted shard list. Directories
/// contribute their *.jsonl files.
fn expand_corpus(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut sources = Vec::new();
    for path in paths {
        let meta = std::fs::metadata(path).map_err(|e| io_data(path, e))?;
        if meta.is_dir() {
            let mut found = Vec::new();
            let entries = std::fs::read_dir(path).map_err(|e| io_data(path, e))?;
            for entry in entries {
                let entry = entry.map_err(|e| io_data(path, e))?;
                let p = entry.path();
                if p.is_file() && p.extension().is_some_and(|e| e == "jsonl") {
                    found.push(p);
                }
            }
            found.sort();
            sources.extend(found);
        } else {
            sources.push(path.clone());
        }
    }
    if sources.is_empty() {
        return Err(Error::usage("no corpus shards found under --corpus"));
    }
    Ok(sources)
}

fn count_shards(
    sources: &[PathBuf],
    dict: &EntityDictionary,
    cfg: &CountConfig,
    shards_dir: &Path,
) -> Result<Vec<ShardResult>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::internal("building worker pool").with_source(e))?;
    pool.install(|| {
        use rayon::prelude::*;
        sources
            .par_iter()
            .map(|source| count_one(source, dict, cfg.fresh, shards_dir))
            .collect()
    })
}

fn count_one(
    source: &Path,
    dict: &EntityDictionary,
    fresh: bool,
    shards_dir: &Path,
) -> Result<ShardResult> {
    let bytes = std::fs::metadata(source).map_err(|e| io_data(source, e))?.len();
    let source_hash = sha256_file(source)?;
    let stem = source
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "shard".to_string());
    // Cache name binds shard content and dictionary; either changing
    // forces a recount.
    let file_name = format!("{stem}.{}.{}.bin", &source_hash[..8], &dict.hash()[..8]);
    let shard_path = shards_dir.join(&file_name);
    let shard_rel = format!("shards/{file_name}");

    if !fresh && shard_path.exists() {
        if let Ok(store) = CooccurrenceStore::read_file(&shard_path) {
            if store.dict_hash() == dict.hash() {
                eprintln!("skipping shard {} (already counted)", source.display());
                return Ok(ShardResult {
                    source: source.to_path_buf(),
                    source_hash,
                    shard_rel,
                    bytes,
                    n_docs: store.n_docs(),
                    skipped: store.skipped(),
                    store,
                });
            }
        }
        // unreadable or stale cache entry: fall through and recount
    }

    let store = CooccurrenceStore::count_jsonl_file(source, dict)?;
    store.write_file(&shard_path)?;
    eprintln!(
        "shard {}: {} docs, {} skipped",
        source.display(),
        store.n_docs(),
        store.skipped()
    );
    Ok(ShardResult {
        source: source.to_path_buf(),
        source_hash,
        shard_rel,
        bytes,
        n_docs: store.n_docs(),
        skipped: store.skipped(),
        store,
    })
}
