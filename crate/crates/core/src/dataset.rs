//! Probing dataset: fact triples, relation templates, split assignment,
//! cloze renderings, candidate sets, and the alternate-gold index.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::io::{BufRead, Write};
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hashing::{derive_seed, sha256_hex};
use crate::text;

const TEMPLATES_RAW: &str = include_str!("../data/relation_templates.jsonl");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }
}

impl std::str::FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "test" => Ok(Split::Test),
            other => Err(Error::usage(format!("unknown split {other:?} (train|test)"))),
        }
    }
}

/// One probing fact with its split assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactTriple {
    pub uid: String,
    pub subject: String,
    pub relation_id: String,
    pub object: String,
    pub split: Split,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelationType {
    #[serde(rename = "1-1")]
    OneToOne,
    #[serde(rename = "N-1")]
    ManyToOne,
    #[serde(rename = "N-M")]
    ManyToMany,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationTemplate {
    pub relation_id: String,
    pub label: String,
    pub template: String,
    #[serde(rename = "type")]
    pub relation_type: RelationType,
}

#[derive(Debug, Clone)]
pub struct TemplateSet {
    templates: Vec<RelationTemplate>,
    by_id: HashMap<String, usize>,
}

impl TemplateSet {
    /// The English relation templates shipped with the crate.
    pub fn bundled() -> &'static TemplateSet {
        static SET: OnceLock<TemplateSet> = OnceLock::new();
        SET.get_or_init(|| {
            TemplateSet::from_jsonl(TEMPLATES_RAW).expect("bundled templates are valid")
        })
    }

    pub fn from_jsonl(raw: &str) -> Result<TemplateSet> {
        let mut templates = Vec::new();
        let mut by_id = HashMap::new();
        for (lineno, line) in raw.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let t: RelationTemplate = serde_json::from_str(line).map_err(|e| {
                Error::data(format!("template line {}", lineno + 1)).with_source(e)
            })?;
            validate_template(&t.template)
                .map_err(|e| Error::data(format!("template {}: {e}", t.relation_id)))?;
            if by_id.insert(t.relation_id.clone(), templates.len()).is_some() {
                return Err(Error::data(format!("duplicate template for {}", t.relation_id)));
            }
            templates.push(t);
        }
        if templates.is_empty() {
            return Err(Error::data("no templates found"));
        }
        Ok(TemplateSet { templates, by_id })
    }

    pub fn get(&self, relation_id: &str) -> Option<&RelationTemplate> {
        self.by_id.get(relation_id).map(|&i| &self.templates[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = &RelationTemplate> {
        self.templates.iter()
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }
}

fn validate_template(template: &str) -> Result<()> {
    for slot in ["[X]", "[Y]"] {
        if template.matches(slot).count() != 1 {
            return Err(Error::data(format!("needs exactly one {slot}: {template:?}")));
        }
    }
    Ok(())
}

/// Fact identity: first 16 hex digits of sha256("subject|relation|object").
pub fn compute_uid(subject: &str, relation_id: &str, object: &str) -> String {
    let mut uid = sha256_hex(format!("{subject}|{relation_id}|{object}").as_bytes());
    uid.truncate(16);
    uid
}

/// Raw input triple, before validation and uid assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawFact {
    pub subject: String,
    pub relation_id: String,
    pub object: String,
}

impl RawFact {
    /// Parses one JSON object, accepting the common field aliases
    /// (`sub_label`/`subject`, `predicate_id`/`relation_id`, `obj_label`/`object`).
    pub fn from_json(line: &str) -> Result<RawFact> {
        let value: serde_json::Value =
            serde_json::from_str(line).map_err(|e| Error::data("malformed fact").with_source(e))?;
        let field = |names: &[&str]| -> Result<String> {
            for name in names {
                if let Some(s) = value.get(name).and_then(|v| v.as_str()) {
                    return Ok(s.to_string());
                }
            }
            Err(Error::data(format!("fact record is missing {}", names[0])))
        };
        Ok(RawFact {
            subject: field(&["subject", "sub_label"])?,
            relation_id: field(&["relation_id", "predicate_id", "relation"])?,
            object: field(&["object", "obj_label"])?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactExclusionReason {
    EmptyField,
    MissingTemplate,
    ObjectNotSingleWord,
    ObjectNotInVocabulary,
    DuplicateFact,
}

impl std::fmt::Display for FactExclusionReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FactExclusionReason::EmptyField => write!(f, "empty subject or object"),
            FactExclusionReason::MissingTemplate => write!(f, "no template for relation"),
            FactExclusionReason::ObjectNotSingleWord => write!(f, "object is not a single word"),
            FactExclusionReason::ObjectNotInVocabulary => {
                write!(f, "object is not in the vocabulary")
            }
            FactExclusionReason::DuplicateFact => write!(f, "duplicate fact"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactExclusion {
    pub fact: RawFact,
    pub reason: FactExclusionReason,
}

/// A validated fact awaiting split assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactDraft {
    pub uid: String,
    pub subject: String,
    pub relation_id: String,
    pub object: String,
}

/// Validates raw triples: the relation must have a template and the object
/// must be a single word from `vocabulary` (folded comparison). Duplicate
/// (subject, relation, object) triples keep their first occurrence.
pub fn preprocess(
    raw: &[RawFact],
    vocabulary: &HashSet<String>,
    templates: &TemplateSet,
) -> (Vec<FactDraft>, Vec<FactExclusion>) {
    let mut drafts = Vec::new();
    let mut exclusions = Vec::new();
    let mut seen_uids = HashSet::new();
    for fact in raw {
        let subject = fact.subject.trim();
        let object = fact.object.trim();
        let reason = if subject.is_empty() || object.is_empty() || fact.relation_id.is_empty() {
            Some(FactExclusionReason::EmptyField)
        } else if templates.get(&fact.relation_id).is_none() {
            Some(FactExclusionReason::MissingTemplate)
        } else if object.split_whitespace().count() != 1 {
            Some(FactExclusionReason::ObjectNotSingleWord)
        } else if !vocabulary.contains(&text::fold(object)) {
            Some(FactExclusionReason::ObjectNotInVocabulary)
        } else {
            let uid = compute_uid(subject, &fact.relation_id, object);
            if seen_uids.insert(uid.clone()) {
                drafts.push(FactDraft {
                    uid,
                    subject: subject.to_string(),
                    relation_id: fact.relation_id.clone(),
                    object: object.to_string(),
                });
                None
            } else {
                Some(FactExclusionReason::DuplicateFact)
            }
        };
        if let Some(reason) = reason {
            exclusions.push(FactExclusion { fact: fact.clone(), reason });
        }
    }
    (drafts, exclusions)
}

/// Assigns splits relation by relation: each relation's facts are shuffled
/// with an RNG derived from (seed, relation id) and the first
/// floor(train_ratio * n) become train. Input order is preserved.
pub fn split(drafts: Vec<FactDraft>, train_ratio: f64, seed: u64) -> Result<Vec<FactTriple>> {
    if !(0.0..=1.0).contains(&train_ratio) {
        return Err(Error::usage(format!("train ratio {train_ratio} outside [0, 1]")));
    }
    let mut by_relation: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for d in &drafts {
        by_relation.entry(&d.relation_id).or_default().push(&d.uid);
    }
    let mut train_uids: HashSet<&str> = HashSet::new();
    for (relation_id, mut uids) in by_relation {
        // Shuffle from a sorted base so the assignment is independent of
        // input order.
        uids.sort_unstable();
        let mut rng = ChaCha20Rng::from_seed(derive_seed("split", seed, relation_id));
        uids.shuffle(&mut rng);
        let n_train = (train_ratio * uids.len() as f64).floor() as usize;
        train_uids.extend(&uids[..n_train.min(uids.len())]);
    }
    Ok(drafts
        .iter()
        .map(|d| FactTriple {
            uid: d.uid.clone(),
            subject: d.subject.clone(),
            relation_id: d.relation_id.clone(),
            object: d.object.clone(),
            split: if train_uids.contains(d.uid.as_str()) { Split::Train } else { Split::Test },
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderMode {
    /// Statement with the object replaced by `[MASK]`.
    Masked,
    /// Statement truncated just before the mask, trailing whitespace trimmed.
    ZeroShotPrefix,
    /// Instruction-style prompt wrapping the masked statement.
    FinetunePrompt,
}

/// Renders a fact's cloze statement in the requested shape.
pub fn render(subject: &str, template: &str, mode: RenderMode) -> Result<String> {
    validate_template(template)?;
    let masked = template.replace("[X]", subject).replace("[Y]", "[MASK]");
    Ok(match mode {
        RenderMode::Masked => masked,
        RenderMode::ZeroShotPrefix => {
            // validate_template guarantees the mask is present.
            let cut = masked.find("[MASK]").expect("mask present");
            masked[..cut].trim_end().to_string()
        }
        RenderMode::FinetunePrompt => format!("### Input:\n {masked}\n\n### Response:"),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateMode {
    /// Every vocabulary word except stopwords.
    RemoveStopwords,
    /// Gold objects of the whole dataset.
    GoldObjects,
    /// Gold objects of the fact's own relation.
    GoldObjectsRelationWise,
}

impl CandidateMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CandidateMode::RemoveStopwords => "remove-stopwords",
            CandidateMode::GoldObjects => "gold-objects",
            CandidateMode::GoldObjectsRelationWise => "gold-objects-relation-wise",
        }
    }
}

impl std::str::FromStr for CandidateMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "remove-stopwords" => Ok(CandidateMode::RemoveStopwords),
            "gold-objects" => Ok(CandidateMode::GoldObjects),
            "gold-objects-relation-wise" => Ok(CandidateMode::GoldObjectsRelationWise),
            other => Err(Error::usage(format!(
                "unknown candidate mode {other:?} \
                 (remove-stopwords|gold-objects|gold-objects-relation-wise)"
            ))),
        }
    }
}

/// The tokens a model is ranked against. Tokens are folded, sorted, and
/// deduplicated; a token's id is its index in the active sorted list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    mode: CandidateMode,
    global: Vec<String>,
    by_relation: BTreeMap<String, Vec<String>>,
}

/// Builds the candidate set for `mode`. `vocabulary` is consulted only by
/// `RemoveStopwords`; the gold modes draw from the facts themselves.
/// Candidate sets are built over the full dataset, not one split, so token
/// ids stay stable regardless of which split is evaluated.
pub fn build_candidate_set(
    facts: &[FactTriple],
    mode: CandidateMode,
    vocabulary: &[String],
) -> CandidateSet {
    let mut by_relation: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut global: Vec<String> = match mode {
        CandidateMode::RemoveStopwords => vocabulary
            .iter()
            .map(|w| text::fold(w))
            .filter(|t| !t.is_empty() && !t.contains(char::is_whitespace) && !text::is_stopword(t))
            .collect(),
        CandidateMode::GoldObjects | CandidateMode::GoldObjectsRelationWise => {
            let mut global = Vec::with_capacity(facts.len());
            for f in facts {
                let token = text::fold(&f.object);
                if mode == CandidateMode::GoldObjectsRelationWise {
                    by_relation.entry(f.relation_id.clone()).or_default().push(token.clone());
                }
                global.push(token);
            }
            global
        }
    };
    global.sort_unstable();
    global.dedup();
    for tokens in by_relation.values_mut() {
        tokens.sort_unstable();
        tokens.dedup();
    }
    CandidateSet { mode, global, by_relation }
}

impl CandidateSet {
    pub fn mode(&self) -> CandidateMode {
        self.mode
    }

    /// Active candidates for a fact of `relation_id`, sorted. Token ids are
    /// indices into this slice.
    pub fn members(&self, relation_id: &str) -> &[String] {
        match self.mode {
            CandidateMode::GoldObjectsRelationWise => self
                .by_relation
                .get(relation_id)
                .map(Vec::as_slice)
                .unwrap_or(&[]),
            _ => &self.global,
        }
    }

    pub fn token_id(&self, relation_id: &str, token: &str) -> Option<usize> {
        self.members(relation_id).binary_search_by(|t| t.as_str().cmp(token)).ok()
    }
}

/// For each (subject, relation), every gold object seen in the dataset.
/// Keys and values are folded tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AlternateGoldIndex {
    map: HashMap<(String, String), BTreeSet<String>>,
}

pub fn build_alternate_gold_index(facts: &[FactTriple]) -> AlternateGoldIndex {
    let mut map: HashMap<(String, String), BTreeSet<String>> = HashMap::new();
    for f in facts {
        map.entry((text::fold(&f.subject), f.relation_id.clone()))
            .or_default()
            .insert(text::fold(&f.object));
    }
    AlternateGoldIndex { map }
}

impl AlternateGoldIndex {
    /// Gold objects recorded for the fact's (subject, relation), minus the
    /// fact's own object: the tokens to drop from its candidate list.
    pub fn alternates(&self, fact: &FactTriple) -> Vec<&str> {
        let key = (text::fold(&fact.subject), fact.relation_id.clone());
        let own = text::fold(&fact.object);
        match self.map.get(&key) {
            None => Vec::new(),
            Some(set) => set.iter().map(String::as_str).filter(|&o| o != own).collect(),
        }
    }
}

/// Writes facts as JSONL in input order.
pub fn write_facts_jsonl<W: Write>(facts: &[FactTriple], mut w: W) -> Result<()> {
    for fact in facts {
        let line = serde_json::to_string(fact).expect("fact serialization");
        writeln!(w, "{line}").map_err(|e| Error::data("writing dataset").with_source(e))?;
    }
    Ok(())
}

/// Reads a dataset, enforcing uid integrity and uniqueness.
pub fn read_facts_jsonl<R: BufRead>(r: R) -> Result<Vec<FactTriple>> {
    let mut facts: Vec<FactTriple> = Vec::new();
    let mut seen = HashSet::new();
    for (lineno, line) in r.lines().enumerate() {
        let line = line.map_err(|e| Error::data("reading dataset").with_source(e))?;
        if line.trim().is_empty() {
            continue;
        }
        let fact: FactTriple = serde_json::from_str(&line)
            .map_err(|e| Error::data(format!("dataset line {}", lineno + 1)).with_source(e))?;
        let expect = compute_uid(&fact.subject, &fact.relation_id, &fact.object);
        if fact.uid != expect {
            return Err(Error::data(format!(
                "dataset line {}: uid {} does not match its triple (expected {expect})",
                lineno + 1,
                fact.uid
            )));
        }
        if !seen.insert(fact.uid.clone()) {
            return Err(Error::data(format!(
                "dataset line {}: duplicate uid {}",
                lineno + 1,
                fact.uid
            )));
        }
        facts.push(fact);
    }
    Ok(facts)
}
