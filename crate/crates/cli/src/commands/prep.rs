//! `prep`: validate raw facts against the vocabulary intersection and the
//! relation templates, split per relation, and export the dataset plus
//! rendered prompts.

use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::Serialize;

use cooc_core::dataset::{
    preprocess, render, split, write_facts_jsonl, FactTriple, RawFact, RenderMode, Split,
    TemplateSet,
};
use cooc_core::error::io_data;
use cooc_core::text::fold;
use cooc_core::{Error, Result};

use crate::config::PrepConfig;
use crate::manifest::ManifestBuilder;
use crate::util::{create_file, csv_field, finish_file, read_surface_lines};

#[derive(Serialize)]
struct ZeroShotRow<'a> {
    uid: &'a str,
    split: &'a str,
    prompt: String,
}

#[derive(Serialize)]
struct FinetuneRow<'a> {
    uid: &'a str,
    split: &'a str,
    prompt: String,
    completion: &'a str,
}

pub fn run(cfg: PrepConfig) -> Result<()> {
    let owned_templates;
    let templates = match &cfg.templates {
        Some(path) => {
            let raw = std::fs::read_to_string(path).map_err(|e| io_data(path, e))?;
            owned_templates = TemplateSet::from_jsonl(&raw)
                .map_err(|e| Error::data(format!("reading {}", path.display())).with_source(e))?;
            &owned_templates
        }
        None => TemplateSet::bundled(),
    };

    // Objects must appear in every configured vocabulary; folded comparison.
    let mut vocab_iter = cfg.vocab.iter();
    let first = vocab_iter.next().ok_or_else(|| Error::usage("missing --vocab"))?;
    let mut vocabulary: HashSet<String> =
        read_surface_lines(first)?.iter().map(|w| fold(w)).collect();
    for path in vocab_iter {
        let other: HashSet<String> = read_surface_lines(path)?.iter().map(|w| fold(w)).collect();
        vocabulary.retain(|w| other.contains(w));
    }

    let raw_facts = read_raw_facts(&cfg.facts)?;
    let (drafts, exclusions) = preprocess(&raw_facts, &vocabulary, templates);
    if drafts.is_empty() {
        return Err(Error::data(format!(
            "no usable facts in {} ({} excluded)",
            cfg.facts.display(),
            exclusions.len()
        )));
    }
    let facts = split(drafts, cfg.train_ratio, cfg.seed)?;

    std::fs::create_dir_all(&cfg.out).map_err(|e| io_data(&cfg.out, e))?;

    let dataset_path = cfg.out.join("dataset.jsonl");
    let mut w = create_file(&dataset_path)?;
    write_facts_jsonl(&facts, &mut w)?;
    finish_file(w, &dataset_path)?;

    let excl_path = cfg.out.join("exclusions.csv");
    let mut w = create_file(&excl_path)?;
    writeln!(w, "subject,relation_id,object,reason").map_err(|e| io_data(&excl_path, e))?;
    for e in &exclusions {
        writeln!(
            w,
            "{},{},{},{}",
            csv_field(&e.fact.subject),
            csv_field(&e.fact.relation_id),
            csv_field(&e.fact.object),
            csv_field(&e.reason.to_string())
        )
        .map_err(|err| io_data(&excl_path, err))?;
    }
    finish_file(w, &excl_path)?;

    let counts_path = cfg.out.join("relation_counts.csv");
    write_relation_counts(&facts, &counts_path)?;

    let zeroshot_path = cfg.out.join("prompts_zeroshot.jsonl");
    let finetune_path = cfg.out.join("prompts_finetune.jsonl");
    write_prompts(&facts, templates, &zeroshot_path, &finetune_path)?;

    let n_train = facts.iter().filter(|f| f.split == Split::Train).count();
    eprintln!(
        "kept {} facts ({} train / {} test), excluded {}",
        facts.len(),
        n_train,
        facts.len() - n_train,
        exclusions.len()
    );

    let mut manifest = ManifestBuilder::new("prep", &cfg)?;
    manifest.input(&cfg.facts)?;
    for path in &cfg.vocab {
        manifest.input(path)?;
    }
    if let Some(path) = &cfg.templates {
        manifest.input(path)?;
    }
    for path in [&dataset_path, &excl_path, &counts_path, &zeroshot_path, &finetune_path] {
        manifest.output(path)?;
    }
    manifest.details(serde_json::json!({
        "n_raw": raw_facts.len(),
        "n_kept": facts.len(),
        "n_excluded": exclusions.len(),
        "n_train": n_train,
        "n_test": facts.len() - n_train,
        "vocabulary_size": vocabulary.len(),
    }));
    manifest.write(&cfg.out.join("manifest.json"))
}

fn read_raw_facts(path: &Path) -> Result<Vec<RawFact>> {
    let file = std::fs::File::open(path).map_err(|e| io_data(path, e))?;
    let mut raw = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| io_data(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let fact = RawFact::from_json(&line).map_err(|e| {
            Error::data(format!("{} line {}", path.display(), lineno + 1)).with_source(e)
        })?;
        raw.push(fact);
    }
    Ok(raw)
}

fn write_relation_counts(facts: &[FactTriple], path: &Path) -> Result<()> {
    let mut per_relation: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for f in facts {
        let e = per_relation.entry(&f.relation_id).or_insert((0, 0));
        e.0 += 1;
        if f.split == Split::Train {
            e.1 += 1;
        }
    }
    let mut w = create_file(path)?;
    writeln!(w, "relation_id,n_total,n_train,n_test").map_err(|e| io_data(path, e))?;
    for (rel, (n, train)) in &per_relation {
        writeln!(w, "{rel},{n},{train},{}", n - train).map_err(|e| io_data(path, e))?;
    }
    finish_file(w, path)
}

fn write_prompts(
    facts: &[FactTriple],
    templates: &TemplateSet,
    zeroshot_path: &Path,
    finetune_path: &Path,
) -> Result<()> {
    let mut zw = create_file(zeroshot_path)?;
    let mut fw = create_file(finetune_path)?;
    for fact in facts {
        // preprocess admitted the fact, so its template exists
        let template = templates
            .get(&fact.relation_id)
            .ok_or_else(|| Error::internal(format!("no template for {}", fact.relation_id)))?;
        let zrow = ZeroShotRow {
            uid: &fact.uid,
            split: fact.split.as_str(),
            prompt: render(&fact.subject, &template.template, RenderMode::ZeroShotPrefix)?,
        };
        let frow = FinetuneRow {
            uid: &fact.uid,
            split: fact.split.as_str(),
            prompt: render(&fact.subject, &template.template, RenderMode::FinetunePrompt)?,
            completion: &fact.object,
        };
        writeln!(zw, "{}", serde_json::to_string(&zrow).expect("prompt serialization"))
            .map_err(|e| io_data(zeroshot_path, e))?;
        writeln!(fw, "{}", serde_json::to_string(&frow).expect("prompt serialization"))
            .map_err(|e| io_data(finetune_path, e))?;
    }
    finish_file(zw, zeroshot_path)?;
    finish_file(fw, finetune_path)
}
