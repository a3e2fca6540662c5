//! `export-tsv`: dump the merged store's pair counts for inspection.

use cooc_core::Result;

use crate::config::ExportConfig;
use crate::manifest::ManifestBuilder;
use crate::util::{create_file, finish_file};

pub fn run(cfg: ExportConfig) -> Result<()> {
    let (dict, store) = super::load_store_dir(&cfg.store)?;
    let mut w = create_file(&cfg.out)?;
    store.export_tsv(&dict, &mut w)?;
    finish_file(w, &cfg.out)?;

    let mut manifest = ManifestBuilder::new("export-tsv", &cfg)?;
    manifest.input(&cfg.store.join(super::DICTIONARY_FILE))?;
    manifest.input(&cfg.store.join(super::STORE_FILE))?;
    manifest.output(&cfg.out)?;
    let manifest_path = cfg.out.with_extension("manifest.json");
    manifest.write(&manifest_path)
}
