//! Shared test support: a seeded corpus generator and a brute-force
//! counting oracle that shares nothing with the store implementation.
//!
//! Each integration test compiles its own copy; not every target uses
//! every helper.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use cooc_core::text::normalize;

pub const TOKEN_POOL: [&str; 30] = [
    "ottawa", "canada", "paris", "france", "river", "north", "lake", "union", "city", "king",
    "market", "stone", "green", "valley", "port", "bridge", "tower", "island", "bay", "gold",
    "iron", "wolf", "bear", "eagle", "pine", "oak", "mill", "ford", "hill", "dale",
];

const STOPS: [&str; 6] = ["the", "of", "is", "and", "in", "to"];
const SEPARATORS: [&str; 7] = [" ", " ", " ", ", ", ". ", " - ", "  "];

pub struct TestWorld {
    pub subject_pool: Vec<String>,
    pub word_pool: Vec<String>,
    pub docs: Vec<String>,
}

/// Generates a corpus with up to `max_docs` documents plus entity and word
/// pools that include case noise, duplicates, and ineligible entries.
pub fn generate_world(seed: u64, max_docs: usize) -> TestWorld {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);

    let mut subject_pool = Vec::new();
    for _ in 0..12 {
        let len = rng.gen_range(1..=3);
        let phrase: Vec<&str> =
            (0..len).map(|_| *TOKEN_POOL.choose(&mut rng).unwrap()).collect();
        subject_pool.push(case_noise(&mut rng, &phrase.join(" ")));
    }
    subject_pool.push("north lake union bridge city".into()); // too many tokens
    subject_pool.push("The Of".into()); // normalizes to nothing
    let dup = subject_pool[0].to_uppercase();
    subject_pool.push(dup); // duplicate normal form

    let mut word_pool: Vec<String> = (0..15)
        .map(|_| {
            let w = *TOKEN_POOL.choose(&mut rng).unwrap();
            case_noise(&mut rng, w)
        })
        .collect();
    word_pool.push("the".into()); // stopword, normalizes to nothing
    word_pool.push("ice-cream".into()); // two tokens
    let dup = word_pool[0].to_uppercase();
    word_pool.push(dup);

    let n_docs = rng.gen_range(0..=max_docs);
    let docs = (0..n_docs).map(|_| generate_doc(&mut rng, &subject_pool)).collect();
    TestWorld { subject_pool, word_pool, docs }
}

fn generate_doc(rng: &mut ChaCha20Rng, subjects: &[String]) -> String {
    let n_units = rng.gen_range(0..=25);
    let mut doc = String::new();
    for i in 0..n_units {
        if i > 0 {
            doc.push_str(SEPARATORS.choose(rng).unwrap());
        }
        match rng.gen_range(0..10) {
            0 | 1 => doc.push_str(subjects.choose(rng).unwrap()),
            2 | 3 => doc.push_str(STOPS.choose(rng).unwrap()),
            _ => {
                let token = *TOKEN_POOL.choose(rng).unwrap();
                let unit = case_noise(rng, token);
                doc.push_str(&unit);
            }
        }
    }
    doc
}

fn case_noise(rng: &mut ChaCha20Rng, s: &str) -> String {
    match rng.gen_range(0..4) {
        0 => s.to_uppercase(),
        1 => {
            let mut chars = s.chars();
            match chars.next() {
                Some(first) => first.to_uppercase().chain(chars).collect(),
                None => String::new(),
            }
        }
        _ => s.to_string(),
    }
}

/// Counts computed the slow, obvious way, keyed by normalized surfaces.
pub struct OracleCounts {
    pub n_docs: u64,
    pub subjects: BTreeSet<String>,
    pub words: BTreeSet<String>,
    pub word_df: BTreeMap<String, u64>,
    pub subject_df: BTreeMap<String, u64>,
    pub pair_df: BTreeMap<(String, String), u64>,
}

pub fn oracle_count(
    docs: &[String],
    subject_pool: &[String],
    word_pool: &[String],
) -> OracleCounts {
    let mut subjects: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for s in subject_pool {
        let toks = normalize(s);
        if (1..=3).contains(&toks.len()) {
            subjects.entry(toks.join(" ")).or_insert(toks);
        }
    }
    let mut words: BTreeSet<String> = BTreeSet::new();
    for w in word_pool {
        let toks = normalize(w);
        if toks.len() == 1 {
            words.insert(toks[0].clone());
        }
    }

    let mut out = OracleCounts {
        n_docs: 0,
        subjects: subjects.keys().cloned().collect(),
        words: words.clone(),
        word_df: BTreeMap::new(),
        subject_df: BTreeMap::new(),
        pair_df: BTreeMap::new(),
    };
    for doc in docs {
        out.n_docs += 1;
        let toks = normalize(doc);
        let present_words: BTreeSet<&String> =
            words.iter().filter(|w| toks.contains(w)).collect();
        let present_subjects: BTreeSet<&String> = subjects
            .iter()
            .filter(|(_, seq)| contains_seq(&toks, seq))
            .map(|(surface, _)| surface)
            .collect();
        for &w in &present_words {
            *out.word_df.entry(w.clone()).or_insert(0) += 1;
        }
        for &s in &present_subjects {
            *out.subject_df.entry(s.clone()).or_insert(0) += 1;
            for &w in &present_words {
                *out.pair_df.entry((s.clone(), w.clone())).or_insert(0) += 1;
            }
        }
    }
    out
}

fn contains_seq(hay: &[String], needle: &[String]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}
