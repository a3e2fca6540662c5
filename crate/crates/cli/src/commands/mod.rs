//! Subcommand implementations.

pub mod analyze;
pub mod baseline;
pub mod count;
pub mod debias_cmd;
pub mod eval_cmd;
pub mod export;
pub mod prep;

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use cooc_core::dataset::{read_facts_jsonl, CandidateMode, FactTriple};
use cooc_core::dictionary::EntityDictionary;
use cooc_core::error::io_data;
use cooc_core::store::CooccurrenceStore;
use cooc_core::{Error, Result};

use crate::config::SplitFilter;
use crate::util::read_surface_lines;

pub(crate) const DICTIONARY_FILE: &str = "dictionary.json";
pub(crate) const STORE_FILE: &str = "store.bin";

/// Loads a store directory written by `count`: dictionary plus merged
/// counts, verified to belong together.
pub(crate) fn load_store_dir(dir: &Path) -> Result<(EntityDictionary, CooccurrenceStore)> {
    let dict_path = dir.join(DICTIONARY_FILE);
    let raw = std::fs::read_to_string(&dict_path).map_err(|e| io_data(&dict_path, e))?;
    let dict = EntityDictionary::from_json(&raw)
        .map_err(|e| Error::data(format!("reading {}", dict_path.display())).with_source(e))?;
    let store = CooccurrenceStore::read_file(&dir.join(STORE_FILE))?;
    if store.dict_hash() != dict.hash() {
        return Err(Error::data(format!(
            "store {} was counted against a different dictionary than {}",
            dir.join(STORE_FILE).display(),
            dict_path.display()
        )));
    }
    Ok((dict, store))
}

pub(crate) fn load_facts(path: &Path) -> Result<Vec<FactTriple>> {
    let file = File::open(path).map_err(|e| io_data(path, e))?;
    read_facts_jsonl(BufReader::new(file))
        .map_err(|e| Error::data(format!("reading {}", path.display())).with_source(e))
}

/// Raw vocabulary lines for candidate construction. Only remove-stopwords
/// consults a vocabulary; requiring the flag for that mode alone keeps the
/// gold modes free of unused inputs.
pub(crate) fn candidate_vocab(
    mode: CandidateMode,
    vocab: &Option<PathBuf>,
) -> Result<Vec<String>> {
    match (mode, vocab) {
        (CandidateMode::RemoveStopwords, None) => Err(Error::usage(
            "--candidates remove-stopwords needs --vocab",
        )),
        (CandidateMode::RemoveStopwords, Some(path)) => read_surface_lines(path),
        (_, _) => Ok(Vec::new()),
    }
}

pub(crate) fn filter_split(facts: &[FactTriple], split: SplitFilter) -> Vec<FactTriple> {
    facts.iter().filter(|f| split.keeps(f.split)).cloned().collect()
}
