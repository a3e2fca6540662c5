//! Rank-based evaluation of per-fact predictions.
//!
//! A fact is scored against the active candidate list for its relation,
//! with other valid objects of the same (subject, relation) removed so a
//! model is never punished for preferring an alternative correct answer.
//! Ranks use competition ranking; score ties break toward the smaller
//! token id, i.e. the lexicographically earlier candidate.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{BufRead, Write};

use crate::dataset::{AlternateGoldIndex, CandidateSet, FactTriple};
use crate::dictionary::EntityDictionary;
use crate::error::{Error, Result};
use crate::store::CooccurrenceStore;
use crate::text;

/// Model output for one fact: explicit scores or an ordered ranking.
#[derive(Debug, Clone, PartialEq)]
pub enum Prediction {
    Scores(HashMap<String, f64>),
    Ranking(Vec<String>),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PredictionSet {
    by_uid: HashMap<String, Prediction>,
}

impl PredictionSet {
    pub fn get(&self, uid: &str) -> Option<&Prediction> {
        self.by_uid.get(uid)
    }

    pub fn len(&self) -> usize {
        self.by_uid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_uid.is_empty()
    }

    pub fn insert(&mut self, uid: String, prediction: Prediction) -> Result<()> {
        if self.by_uid.insert(uid.clone(), prediction).is_some() {
            return Err(Error::data(format!("duplicate prediction for uid {uid}")));
        }
        Ok(())
    }

    /// Parses prediction JSONL: per line `{"uid", "scores": {token: score}}`
    /// or `{"uid", "ranking": [token, ...]}`. Token keys fold; when two keys
    /// fold together the higher score (or earlier rank position) wins.
    pub fn from_jsonl<R: BufRead>(r: R) -> Result<PredictionSet> {
        let mut set = PredictionSet::default();
        for (lineno, line) in r.lines().enumerate() {
            let at = |msg: &str| Error::data(format!("prediction line {}: {msg}", lineno + 1));
            let line = line.map_err(|e| Error::data("reading predictions").with_source(e))?;
            if line.trim().is_empty() {
                continue;
            }
            let value: serde_json::Value = serde_json::from_str(&line)
                .map_err(|e| at("malformed JSON").with_source(e))?;
            let uid = value
                .get("uid")
                .and_then(|v| v.as_str())
                .ok_or_else(|| at("missing uid"))?
                .to_string();
            let prediction = match (value.get("scores"), value.get("ranking")) {
                (Some(_), Some(_)) => {
                    return Err(at("has both scores and ranking"));
                }
                (Some(scores), None) => {
                    let obj = scores.as_object().ok_or_else(|| at("scores must be an object"))?;
                    let mut map: HashMap<String, f64> = HashMap::with_capacity(obj.len());
                    for (token, score) in obj {
                        let score = score
                            .as_f64()
                            .ok_or_else(|| at(&format!("score for {token:?} is not a number")))?;
                        let folded = text::fold(token);
                        match map.entry(folded) {
                            std::collections::hash_map::Entry::Occupied(mut e) => {
                                if score > *e.get() {
                                    e.insert(score);
                                }
                            }
                            std::collections::hash_map::Entry::Vacant(e) => {
                                e.insert(score);
                            }
                        }
                    }
                    Prediction::Scores(map)
                }
                (None, Some(ranking)) => {
                    let arr =
                        ranking.as_array().ok_or_else(|| at("ranking must be an array"))?;
                    let mut seen = HashSet::with_capacity(arr.len());
                    let mut tokens = Vec::with_capacity(arr.len());
                    for t in arr {
                        let t = t.as_str().ok_or_else(|| at("ranking entries must be strings"))?;
                        let folded = text::fold(t);
                        if seen.insert(folded.clone()) {
                            tokens.push(folded);
                        }
                    }
                    Prediction::Ranking(tokens)
                }
                (None, None) => return Err(at("needs either scores or ranking")),
            };
            set.insert(uid, prediction).map_err(|e| at(&e.to_string()))?;
        }
        Ok(set)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactOutcome {
    pub uid: String,
    pub relation_id: String,
    /// Competition rank of the gold object, ties broken by token id.
    pub rank: usize,
    pub hits1: bool,
    pub rr: f64,
    /// Highest-scored candidate after other-gold removal.
    pub top_pred: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MicroStats {
    pub n: usize,
    pub hits1: f64,
    pub mrr: f64,
}

impl MicroStats {
    fn from_outcomes<'a>(outcomes: impl Iterator<Item = &'a FactOutcome>) -> MicroStats {
        let (mut n, mut hits, mut rr_sum) = (0usize, 0usize, 0.0f64);
        for o in outcomes {
            n += 1;
            hits += o.hits1 as usize;
            rr_sum += o.rr;
        }
        MicroStats {
            n,
            hits1: if n == 0 { 0.0 } else { hits as f64 / n as f64 },
            mrr: if n == 0 { 0.0 } else { rr_sum / n as f64 },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    /// Per-fact outcomes, sorted by uid.
    pub outcomes: Vec<FactOutcome>,
    pub overall: MicroStats,
    pub by_relation: BTreeMap<String, MicroStats>,
}

/// Evaluates every fact in `facts`. Errors if a fact has no prediction, if
/// its gold object is missing from the candidate set, or if the prediction
/// fails to cover a candidate it is ranked against.
pub fn evaluate(
    facts: &[FactTriple],
    predictions: &PredictionSet,
    candidates: &CandidateSet,
    alternates: &AlternateGoldIndex,
) -> Result<EvalReport> {
    let mut outcomes = Vec::with_capacity(facts.len());
    for fact in facts {
        outcomes.push(evaluate_fact(fact, predictions, candidates, alternates)?);
    }
    outcomes.sort_by(|a, b| a.uid.cmp(&b.uid));

    let overall = MicroStats::from_outcomes(outcomes.iter());
    let mut by_relation: BTreeMap<String, MicroStats> = BTreeMap::new();
    let mut relations: Vec<&str> = outcomes.iter().map(|o| o.relation_id.as_str()).collect();
    relations.sort_unstable();
    relations.dedup();
    for rel in relations {
        by_relation.insert(
            rel.to_string(),
            MicroStats::from_outcomes(outcomes.iter().filter(|o| o.relation_id == rel)),
        );
    }
    Ok(EvalReport { outcomes, overall, by_relation })
}

fn evaluate_fact(
    fact: &FactTriple,
    predictions: &PredictionSet,
    candidates: &CandidateSet,
    alternates: &AlternateGoldIndex,
) -> Result<FactOutcome> {
    let uid = &fact.uid;
    let active = candidates.members(&fact.relation_id);
    let gold = text::fold(&fact.object);
    let gold_id = candidates
        .token_id(&fact.relation_id, &gold)
        .ok_or_else(|| {
            Error::data(format!("uid {uid}: gold object {gold:?} is not in the candidate set"))
        })?;
    let removed: HashSet<&str> = alternates.alternates(fact).into_iter().collect();
    let prediction = predictions
        .get(uid)
        .ok_or_else(|| Error::data(format!("no prediction for uid {uid}")))?;

    let ranking_pos: HashMap<&str, usize> = match prediction {
        Prediction::Ranking(tokens) => {
            tokens.iter().enumerate().map(|(i, t)| (t.as_str(), i)).collect()
        }
        Prediction::Scores(_) => HashMap::new(),
    };
    let score_of = |token: &str| -> Result<f64> {
        match prediction {
            Prediction::Scores(map) => map.get(token).copied().ok_or_else(|| {
                Error::data(format!("uid {uid}: prediction has no score for candidate {token:?}"))
            }),
            Prediction::Ranking(_) => ranking_pos
                .get(token)
                .map(|&p| -(p as f64))
                .ok_or_else(|| {
                    Error::data(format!("uid {uid}: ranking does not cover candidate {token:?}"))
                }),
        }
    };

    let gold_score = score_of(&gold)?;
    let mut rank = 1usize;
    let mut best: Option<(f64, usize)> = None;
    for (id, token) in active.iter().enumerate() {
        if id != gold_id && removed.contains(token.as_str()) {
            continue;
        }
        let score = score_of(token)?;
        if id != gold_id && (score > gold_score || (score == gold_score && id < gold_id)) {
            rank += 1;
        }
        if best.is_none_or(|(bs, _)| score > bs) {
            best = Some((score, id));
        }
    }
    // The gold candidate always participates, so a best exists.
    let (_, top_id) = best.expect("at least the gold candidate is scored");
    let hits1 = rank == 1;
    debug_assert_eq!(hits1, top_id == gold_id);
    Ok(FactOutcome {
        uid: uid.clone(),
        relation_id: fact.relation_id.clone(),
        rank,
        hits1,
        rr: 1.0 / rank as f64,
        top_pred: active[top_id].clone(),
    })
}

/// `uid,relation_id,hits1,rr` rows, sorted by uid.
pub fn write_results_csv<W: Write>(report: &EvalReport, mut w: W) -> Result<()> {
    let io = |e| Error::data("writing results csv").with_source(e);
    writeln!(w, "uid,relation_id,hits1,rr").map_err(io)?;
    for o in &report.outcomes {
        writeln!(w, "{},{},{},{:.6}", o.uid, o.relation_id, o.hits1 as u8, o.rr).map_err(io)?;
    }
    Ok(())
}

/// Per-relation micro metrics plus an `all` row.
pub fn write_summary_csv<W: Write>(report: &EvalReport, mut w: W) -> Result<()> {
    let io = |e| Error::data("writing summary csv").with_source(e);
    writeln!(w, "relation_id,n,hits1,mrr").map_err(io)?;
    for (rel, stats) in &report.by_relation {
        writeln!(w, "{},{},{:.6},{:.6}", rel, stats.n, stats.hits1, stats.mrr).map_err(io)?;
    }
    let all = &report.overall;
    writeln!(w, "all,{},{:.6},{:.6}", all.n, all.hits1, all.mrr).map_err(io)?;
    Ok(())
}

/// One fact's evaluation outcome joined with its corpus statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct JoinedFact {
    pub uid: String,
    pub relation_id: String,
    pub hits1: bool,
    pub rr: f64,
    pub top_pred: String,
    /// Subject unusable (absent from dictionary or corpus) or gold object
    /// without a dictionary word: no corpus statistics exist for the fact.
    pub unknown: bool,
    pub gold_pair_count: Option<u64>,
    pub gold_cond_prob: Option<f64>,
    /// Reciprocal competition rank of the gold pair count among the active
    /// candidates (pure min-rank: ties share the best rank).
    pub cooc_rr: Option<f64>,
    pub pred_pair_count: Option<u64>,
    pub pred_cond_prob: Option<f64>,
}

/// Joins evaluation outcomes with co-occurrence statistics, one record per
/// evaluated fact, sorted by uid. Facts without usable statistics come back
/// with `unknown = true` and empty statistics.
pub fn per_bin_join(
    report: &EvalReport,
    facts: &[FactTriple],
    store: &CooccurrenceStore,
    dict: &EntityDictionary,
    candidates: &CandidateSet,
) -> Result<Vec<JoinedFact>> {
    let by_uid: HashMap<&str, &FactTriple> =
        facts.iter().map(|f| (f.uid.as_str(), f)).collect();
    let mut joined = Vec::with_capacity(report.outcomes.len());
    for outcome in &report.outcomes {
        let fact = by_uid.get(outcome.uid.as_str()).ok_or_else(|| {
            Error::internal(format!("outcome for uid {} has no source fact", outcome.uid))
        })?;
        let sid = dict.subject_id(&fact.subject);
        let subject_docs = sid.map(|s| store.subject_df(s)).unwrap_or(0);
        let gold_wid = dict.word_id(&fact.object);
        let base = JoinedFact {
            uid: outcome.uid.clone(),
            relation_id: outcome.relation_id.clone(),
            hits1: outcome.hits1,
            rr: outcome.rr,
            top_pred: outcome.top_pred.clone(),
            unknown: true,
            gold_pair_count: None,
            gold_cond_prob: None,
            cooc_rr: None,
            pred_pair_count: None,
            pred_cond_prob: None,
        };
        let (Some(sid), Some(gold_wid), true) = (sid, gold_wid, subject_docs > 0) else {
            joined.push(base);
            continue;
        };

        let gold_count = store.pair_count(sid, gold_wid);
        let pair_count_of = |token: &str| -> u64 {
            dict.word_id(token).map(|w| store.pair_count(sid, w)).unwrap_or(0)
        };
        let higher = candidates
            .members(&fact.relation_id)
            .iter()
            .filter(|c| pair_count_of(c) > gold_count)
            .count();
        let pred_count = pair_count_of(&outcome.top_pred);
        joined.push(JoinedFact {
            unknown: false,
            gold_pair_count: Some(gold_count),
            gold_cond_prob: Some(gold_count as f64 / subject_docs as f64),
            cooc_rr: Some(1.0 / (1 + higher) as f64),
            pred_pair_count: Some(pred_count),
            pred_cond_prob: Some(pred_count as f64 / subject_docs as f64),
            ..base
        });
    }
    Ok(joined)
}
