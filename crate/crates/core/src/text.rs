//! Deterministic English text normalization.
//!
//! The tokenizer rule set and the stopword list are fixed and bundled with
//! the crate: document counting and dataset preprocessing must agree on
//! token boundaries across runs and machines, so no external resource is
//! consulted at runtime.

use std::collections::HashSet;
use std::sync::OnceLock;

const STOPWORDS_RAW: &str = include_str!("../data/stopwords_en.txt");

/// Contraction suffixes kept as standalone tokens, Treebank style.
const CLITICS: [&str; 6] = ["'s", "'m", "'d", "'ll", "'re", "'ve"];

/// English stopword snapshot used by `normalize` and candidate filtering.
pub fn stopwords() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| STOPWORDS_RAW.lines().filter(|l| !l.is_empty()).collect())
}

pub fn is_stopword(token: &str) -> bool {
    stopwords().contains(token)
}

/// Canonical form for a single vocabulary token, prediction key, or gold
/// object: trimmed, case-folded, typographic apostrophe mapped to `'`.
pub fn fold(token: &str) -> String {
    token
        .trim()
        .chars()
        .map(|c| if c == '\u{2019}' { '\'' } else { c })
        .flat_map(char::to_lowercase)
        .collect()
}

/// Lowercases and tokenizes `text`, then removes stopwords.
///
/// Idempotent: normalizing the space-joined output yields the same tokens.
pub fn normalize(text: &str) -> Vec<String> {
    let mut out = tokenize(text);
    out.retain(|t| !is_stopword(t));
    out
}

/// Lowercases and tokenizes without stopword removal.
///
/// Contractions split into Treebank-style clitics (`is n't`, `canada 's`);
/// every other non-alphanumeric character separates tokens, so hyphenated
/// compounds split. Emitted tokens always contain an alphanumeric character.
pub fn tokenize(text: &str) -> Vec<String> {
    let lowered: String = text
        .chars()
        .map(|c| if c == '\u{2019}' { '\'' } else { c })
        .flat_map(char::to_lowercase)
        .collect();
    let mut out = Vec::new();
    for chunk in lowered.split_whitespace() {
        let mut start = None;
        for (i, c) in chunk.char_indices() {
            if c.is_alphanumeric() || c == '\'' {
                start.get_or_insert(i);
            } else if let Some(s) = start.take() {
                emit_run(&chunk[s..i], &mut out);
            }
        }
        if let Some(s) = start {
            emit_run(&chunk[s..], &mut out);
        }
    }
    out
}

/// Splits one maximal alphanumeric-or-apostrophe run into tokens.
fn emit_run(run: &str, out: &mut Vec<String>) {
    if !has_alnum(run) {
        return;
    }
    let mut rest = run;
    // Clitics found at the end of the run, outermost first.
    let mut tail: Vec<&'static str> = Vec::new();
    loop {
        // Clitic tokens produced by an earlier pass stay verbatim; this is
        // what makes tokenization idempotent.
        if rest == "n't" || CLITICS.contains(&rest) {
            out.push(rest.to_string());
            break;
        }
        let trimmed = rest.trim_matches('\'');
        if trimmed != rest {
            rest = trimmed;
            continue;
        }
        if let Some(parts) = irregular_split(rest) {
            out.extend(parts.iter().map(|p| p.to_string()));
            break;
        }
        if let Some((clitic, prefix)) = strip_clitic(rest) {
            tail.push(clitic);
            rest = prefix;
            continue;
        }
        out.push(rest.to_string());
        break;
    }
    out.extend(tail.into_iter().rev().map(String::from));
}

/// Treebank irregular contractions without an apostrophe boundary.
fn irregular_split(word: &str) -> Option<[&'static str; 2]> {
    Some(match word {
        "cannot" => ["can", "not"],
        "gonna" => ["gon", "na"],
        "gotta" => ["got", "ta"],
        "wanna" => ["wan", "na"],
        "lemme" => ["lem", "me"],
        "gimme" => ["gim", "me"],
        _ => return None,
    })
}

fn strip_clitic(word: &str) -> Option<(&'static str, &str)> {
    if let Some(prefix) = word.strip_suffix("n't") {
        if has_alnum(prefix) {
            return Some(("n't", prefix));
        }
    }
    for clitic in CLITICS {
        if let Some(prefix) = word.strip_suffix(clitic) {
            if has_alnum(prefix) {
                return Some((clitic, prefix));
            }
        }
    }
    None
}

fn has_alnum(s: &str) -> bool {
    s.contains(|c: char| c.is_alphanumeric())
}
