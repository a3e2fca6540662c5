//! Entity dictionary: interned tokens, subject surface forms of one to
//! three tokens, and single-token candidate words.
//!
//! Identifiers are dense and assigned in sorted order of the normalized
//! surface form, so equal inputs produce equal dictionaries everywhere.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hashing::sha256_hex;
use crate::text;

pub const MAX_SUBJECT_TOKENS: usize = 3;

/// Padding value for unused positions in a subject key.
const NO_TOKEN: u32 = u32::MAX;
/// Sentinel for document tokens absent from the interner.
const UNKNOWN_TOKEN: u32 = u32::MAX - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubjectId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WordId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubjectEntry {
    /// Normalized surface form, tokens joined by single spaces.
    pub surface: String,
    key: [u32; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityDictionary {
    tokens: Vec<String>,
    token_ids: HashMap<String, u32>,
    subjects: Vec<SubjectEntry>,
    subject_lookup: HashMap<[u32; 3], u32>,
    /// Word id -> token id. Sorted ascending (token order == id order).
    words: Vec<u32>,
    /// Token id -> word id, NO_TOKEN when the token is not a candidate word.
    word_of_token: Vec<u32>,
    hash: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    Subject,
    Word,
}

impl EntryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EntryKind::Subject => "subject",
            EntryKind::Word => "word",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExclusionReason {
    ZeroTokens,
    MoreThanThreeTokens,
    NotSingleToken,
    Duplicate { of: String },
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExclusionReason::ZeroTokens => write!(f, "normalizes to zero tokens"),
            ExclusionReason::MoreThanThreeTokens => write!(f, "more than three tokens"),
            ExclusionReason::NotSingleToken => write!(f, "not a single token after normalization"),
            ExclusionReason::Duplicate { of } => write!(f, "duplicate of {of}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exclusion {
    pub kind: EntryKind,
    pub surface: String,
    pub reason: ExclusionReason,
}

/// Builds a dictionary from raw subject surface forms and vocabulary words.
///
/// Subjects keep 1..=3 normalized tokens; words must normalize to exactly
/// one token. Entries colliding on their normalized form are reported once
/// per extra occurrence. Errors only if both inputs are empty.
pub fn build_dictionary(
    subjects: &[String],
    words: &[String],
) -> Result<(EntityDictionary, Vec<Exclusion>)> {
    if subjects.is_empty() && words.is_empty() {
        return Err(Error::data("dictionary build needs at least one subject or word"));
    }
    let mut exclusions = Vec::new();

    // Normalized joined form -> original surface, insertion keyed by sorted map
    // so id assignment is order-independent.
    let mut subject_forms: BTreeMap<String, String> = BTreeMap::new();
    for surface in subjects {
        let toks = text::normalize(surface);
        let reason = if toks.is_empty() {
            Some(ExclusionReason::ZeroTokens)
        } else if toks.len() > MAX_SUBJECT_TOKENS {
            Some(ExclusionReason::MoreThanThreeTokens)
        } else {
            match subject_forms.get(&toks.join(" ")) {
                Some(first) => Some(ExclusionReason::Duplicate { of: first.clone() }),
                None => {
                    subject_forms.insert(toks.join(" "), surface.clone());
                    None
                }
            }
        };
        if let Some(reason) = reason {
            exclusions.push(Exclusion { kind: EntryKind::Subject, surface: surface.clone(), reason });
        }
    }

    let mut word_forms: BTreeMap<String, String> = BTreeMap::new();
    for word in words {
        let toks = text::normalize(word);
        let reason = match toks.len() {
            0 => Some(ExclusionReason::ZeroTokens),
            1 => match word_forms.get(&toks[0]) {
                Some(first) => Some(ExclusionReason::Duplicate { of: first.clone() }),
                None => {
                    word_forms.insert(toks[0].clone(), word.clone());
                    None
                }
            },
            _ => Some(ExclusionReason::NotSingleToken),
        };
        if let Some(reason) = reason {
            exclusions.push(Exclusion { kind: EntryKind::Word, surface: word.clone(), reason });
        }
    }

    let dict = EntityDictionary::from_normal_forms(
        subject_forms.into_keys().collect(),
        word_forms.into_keys().collect(),
    )?;
    Ok((dict, exclusions))
}

impl EntityDictionary {
    /// Assembles a dictionary from already-normalized subject forms (tokens
    /// joined by single spaces) and single-token words. Inputs may be in any
    /// order but must be duplicate-free and in normal form.
    pub fn from_normal_forms(mut subjects: Vec<String>, mut words: Vec<String>) -> Result<Self> {
        subjects.sort_unstable();
        words.sort_unstable();
        for pair in subjects.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::data(format!("duplicate subject form {:?}", pair[0])));
            }
        }
        for pair in words.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::data(format!("duplicate word {:?}", pair[0])));
            }
        }

        let mut token_set: BTreeSet<String> = BTreeSet::new();
        for surface in &subjects {
            let toks = text::normalize(surface);
            if toks.is_empty() || toks.len() > MAX_SUBJECT_TOKENS || toks.join(" ") != *surface {
                return Err(Error::data(format!("subject {surface:?} is not in normal form")));
            }
            token_set.extend(toks);
        }
        for word in &words {
            let toks = text::normalize(word);
            if toks.len() != 1 || toks[0] != *word {
                return Err(Error::data(format!("word {word:?} is not in normal form")));
            }
            token_set.insert(word.clone());
        }

        let tokens: Vec<String> = token_set.into_iter().collect();
        if tokens.len() as u64 >= UNKNOWN_TOKEN as u64 {
            return Err(Error::data("dictionary exceeds the supported token count"));
        }
        let token_ids: HashMap<String, u32> =
            tokens.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();

        let mut entries = Vec::with_capacity(subjects.len());
        let mut subject_lookup = HashMap::with_capacity(subjects.len());
        for (sid, surface) in subjects.into_iter().enumerate() {
            let mut key = [NO_TOKEN; 3];
            // Validated above: the surface is its tokens joined by spaces.
            for (slot, tok) in key.iter_mut().zip(surface.split(' ')) {
                *slot = token_ids[tok];
            }
            subject_lookup.insert(key, sid as u32);
            entries.push(SubjectEntry { surface, key });
        }

        let mut word_of_token = vec![NO_TOKEN; tokens.len()];
        let word_tids: Vec<u32> = words.iter().map(|w| token_ids[w]).collect();
        for (wid, &tid) in word_tids.iter().enumerate() {
            word_of_token[tid as usize] = wid as u32;
        }

        let mut canon = String::new();
        for e in &entries {
            canon.push('S');
            canon.push('\x1f');
            canon.push_str(&e.surface);
            canon.push('\n');
        }
        for &tid in &word_tids {
            canon.push('W');
            canon.push('\x1f');
            canon.push_str(&tokens[tid as usize]);
            canon.push('\n');
        }

        Ok(EntityDictionary {
            hash: sha256_hex(canon.as_bytes()),
            tokens,
            token_ids,
            subjects: entries,
            subject_lookup,
            words: word_tids,
            word_of_token,
        })
    }

    /// Content hash; stores built against a different dictionary refuse to merge.
    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn n_subjects(&self) -> usize {
        self.subjects.len()
    }

    pub fn n_words(&self) -> usize {
        self.words.len()
    }

    pub fn subject_surface(&self, sid: SubjectId) -> &str {
        &self.subjects[sid.0 as usize].surface
    }

    pub fn word_token(&self, wid: WordId) -> &str {
        &self.tokens[self.words[wid.0 as usize] as usize]
    }

    pub fn subject_surfaces(&self) -> impl Iterator<Item = &str> {
        self.subjects.iter().map(|e| e.surface.as_str())
    }

    pub fn word_tokens(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(|&tid| self.tokens[tid as usize].as_str())
    }

    /// Resolves a raw subject surface form; `None` when it was not eligible
    /// for the dictionary (empty, too long, or simply absent).
    pub fn subject_id(&self, surface: &str) -> Option<SubjectId> {
        let toks = text::normalize(surface);
        if toks.is_empty() || toks.len() > MAX_SUBJECT_TOKENS {
            return None;
        }
        let mut key = [NO_TOKEN; 3];
        for (slot, tok) in key.iter_mut().zip(&toks) {
            *slot = *self.token_ids.get(tok.as_str())?;
        }
        self.subject_lookup.get(&key).map(|&sid| SubjectId(sid))
    }

    /// Resolves a candidate token to its word id; `None` when the token does
    /// not normalize to a single dictionary word.
    pub fn word_id(&self, token: &str) -> Option<WordId> {
        let toks = text::normalize(token);
        if toks.len() != 1 {
            return None;
        }
        let tid = *self.token_ids.get(toks[0].as_str())?;
        match self.word_of_token[tid as usize] {
            NO_TOKEN => None,
            wid => Some(WordId(wid)),
        }
    }

    /// Scans one document's normalized tokens, returning the distinct word
    /// ids present and the distinct subject ids whose token sequence occurs
    /// contiguously. Both lists are sorted.
    pub fn match_document(&self, doc_tokens: &[String]) -> (Vec<WordId>, Vec<SubjectId>) {
        let tids: Vec<u32> = doc_tokens
            .iter()
            .map(|t| self.token_ids.get(t.as_str()).copied().unwrap_or(UNKNOWN_TOKEN))
            .collect();

        let mut wids: Vec<WordId> = Vec::new();
        for &tid in &tids {
            if tid == UNKNOWN_TOKEN {
                continue;
            }
            match self.word_of_token[tid as usize] {
                NO_TOKEN => {}
                wid => wids.push(WordId(wid)),
            }
        }
        wids.sort_unstable();
        wids.dedup();

        let mut sids: Vec<SubjectId> = Vec::new();
        for start in 0..tids.len() {
            if tids[start] == UNKNOWN_TOKEN {
                continue;
            }
            let mut key = [NO_TOKEN; 3];
            for len in 1..=MAX_SUBJECT_TOKENS.min(tids.len() - start) {
                let tid = tids[start + len - 1];
                if tid == UNKNOWN_TOKEN {
                    break;
                }
                key[len - 1] = tid;
                if let Some(&sid) = self.subject_lookup.get(&key) {
                    sids.push(SubjectId(sid));
                }
            }
        }
        sids.sort_unstable();
        sids.dedup();

        (wids, sids)
    }
}

/// Serialized form: normal forms only; lookup tables are rebuilt on load.
#[derive(Serialize, Deserialize)]
struct DictionaryFile {
    hash: String,
    subjects: Vec<String>,
    words: Vec<String>,
}

impl EntityDictionary {
    pub fn to_json(&self) -> String {
        let file = DictionaryFile {
            hash: self.hash.clone(),
            subjects: self.subjects.iter().map(|e| e.surface.clone()).collect(),
            words: self.word_tokens().map(String::from).collect(),
        };
        // Serialization of a string struct cannot fail.
        serde_json::to_string_pretty(&file).expect("dictionary serialization")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let file: DictionaryFile = serde_json::from_str(json)
            .map_err(|e| Error::data("malformed dictionary file").with_source(e))?;
        let dict = Self::from_normal_forms(file.subjects, file.words)?;
        if dict.hash != file.hash {
            return Err(Error::data(format!(
                "dictionary hash mismatch: file says {}, contents hash to {}",
                file.hash, dict.hash
            )));
        }
        Ok(dict)
    }
}
