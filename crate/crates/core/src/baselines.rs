//! Term-frequency baselines: score candidates for a fact straight from the
//! co-occurrence store, no model involved.
//!
//! Zero-statistics conventions: a candidate without a dictionary word
//! scores 0, a zero pair count scores 0 for the joint and ratio baselines,
//! and a subject without usable statistics zeroes every subject-dependent
//! score (the record is flagged `unknown`).

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::dataset::{CandidateSet, FactTriple};
use crate::dictionary::EntityDictionary;
use crate::error::{Error, Result};
use crate::eval::{Prediction, PredictionSet};
use crate::store::CooccurrenceStore;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    /// P(word): how common the candidate is overall.
    Marginal,
    /// P(subject, word): how often the pair shares a document.
    Joint,
    /// P(word | subject) / P(word): association strength.
    Pmi,
}

pub const ALL_BASELINES: [Baseline; 3] = [Baseline::Marginal, Baseline::Joint, Baseline::Pmi];

impl Baseline {
    pub fn as_str(self) -> &'static str {
        match self {
            Baseline::Marginal => "marginal",
            Baseline::Joint => "joint",
            Baseline::Pmi => "pmi",
        }
    }
}

impl std::str::FromStr for Baseline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "marginal" => Ok(Baseline::Marginal),
            "joint" => Ok(Baseline::Joint),
            "pmi" => Ok(Baseline::Pmi),
            other => Err(Error::usage(format!(
                "unknown baseline {other:?} (marginal|joint|pmi)"
            ))),
        }
    }
}

/// One fact's baseline scores over its active candidates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionRecord {
    pub uid: String,
    /// Subject statistics were unavailable, so subject-dependent scores
    /// degenerated to zero.
    pub unknown: bool,
    pub scores: BTreeMap<String, f64>,
}

/// Scores every fact against the active candidates for its relation.
/// Records come back sorted by uid, covering the full candidate list.
pub fn predict(
    baseline: Baseline,
    facts: &[FactTriple],
    candidates: &CandidateSet,
    dict: &EntityDictionary,
    store: &CooccurrenceStore,
) -> Result<Vec<PredictionRecord>> {
    let n_docs = store.n_docs();
    let mut records = Vec::with_capacity(facts.len());
    for fact in facts {
        let sid = dict.subject_id(&fact.subject);
        let subject_docs = sid.map(|s| store.subject_df(s)).unwrap_or(0);
        let subject_known = subject_docs > 0;
        let mut scores = BTreeMap::new();
        for token in candidates.members(&fact.relation_id) {
            let wid = dict.word_id(token);
            let (word_docs, pair) = match (wid, sid) {
                (None, _) => (0, 0),
                (Some(w), None) => (store.word_df(w), 0),
                (Some(w), Some(s)) => (store.word_df(w), store.pair_count(s, w)),
            };
            let score = match baseline {
                Baseline::Marginal => ratio(word_docs, n_docs),
                Baseline::Joint => ratio(pair, n_docs),
                Baseline::Pmi => {
                    if pair == 0 || word_docs == 0 || !subject_known {
                        0.0
                    } else {
                        // (pair / subject_docs) / (word_docs / n_docs)
                        (pair as f64 * n_docs as f64)
                            / (subject_docs as f64 * word_docs as f64)
                    }
                }
            };
            scores.insert(token.clone(), score);
        }
        records.push(PredictionRecord {
            uid: fact.uid.clone(),
            unknown: baseline != Baseline::Marginal && !subject_known,
            scores,
        });
    }
    records.sort_by(|a, b| a.uid.cmp(&b.uid));
    Ok(records)
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// One JSON object per record, in record order, score keys sorted.
pub fn write_predictions_jsonl<W: Write>(
    records: &[PredictionRecord],
    mut w: W,
) -> Result<()> {
    for record in records {
        let line = serde_json::to_string(record).expect("prediction serialization");
        writeln!(w, "{line}").map_err(|e| Error::data("writing predictions").with_source(e))?;
    }
    Ok(())
}

/// View of the records usable directly by the evaluator.
pub fn to_prediction_set(records: &[PredictionRecord]) -> Result<PredictionSet> {
    let mut set = PredictionSet::default();
    for r in records {
        set.insert(
            r.uid.clone(),
            Prediction::Scores(r.scores.iter().map(|(t, &s)| (t.clone(), s)).collect()),
        )?;
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::DocLine;
    use crate::dataset::{build_candidate_set, compute_uid, CandidateMode, Split};
    use crate::dictionary::build_dictionary;

    fn fact(subject: &str, relation_id: &str, object: &str) -> FactTriple {
        FactTriple {
            uid: compute_uid(subject, relation_id, object),
            subject: subject.into(),
            relation_id: relation_id.into(),
            object: object.into(),
            split: Split::Test,
        }
    }

    /// The three-document reference corpus; probabilities check by hand.
    fn toy() -> (EntityDictionary, CooccurrenceStore) {
        let dict = build_dictionary(
            &["Canada".into(), "France".into()],
            &["Ottawa".into(), "Toronto".into(), "Paris".into(), "capital".into()],
        )
        .unwrap()
        .0;
        let store = CooccurrenceStore::count_shard(
            [
                "Ottawa is the capital of Canada",
                "Toronto is in Canada",
                "Paris is the capital of France",
            ]
            .map(|t| Ok(DocLine::Text(t.into()))),
            &dict,
        )
        .unwrap();
        (dict, store)
    }

    fn candidates_for(facts: &[FactTriple]) -> CandidateSet {
        build_candidate_set(facts, CandidateMode::GoldObjects, &[])
    }

    #[test]
    fn marginal_prefers_common_words() {
        let (dict, store) = toy();
        let facts =
            vec![fact("Canada", "P36", "Ottawa"), fact("France", "P1376", "capital")];
        let records =
            predict(Baseline::Marginal, &facts, &candidates_for(&facts), &dict, &store).unwrap();
        let by_uid: BTreeMap<&str, &PredictionRecord> =
            records.iter().map(|r| (r.uid.as_str(), r)).collect();
        let scores = &by_uid[facts[0].uid.as_str()].scores;
        assert!((scores["capital"] - 2.0 / 3.0).abs() < 1e-12);
        assert!((scores["ottawa"] - 1.0 / 3.0).abs() < 1e-12);
        assert!(scores["capital"] > scores["ottawa"]);
        assert!(!by_uid[facts[0].uid.as_str()].unknown);
    }

    #[test]
    fn pmi_prefers_associated_words() {
        let (dict, store) = toy();
        let facts =
            vec![fact("Canada", "P36", "Ottawa"), fact("Canada", "P31", "capital")];
        let records =
            predict(Baseline::Pmi, &facts, &candidates_for(&facts), &dict, &store).unwrap();
        let scores = &records.iter().find(|r| r.uid == facts[0].uid).unwrap().scores;
        // P(ottawa | canada) / P(ottawa) = 0.5 / (1/3)
        assert!((scores["ottawa"] - 1.5).abs() < 1e-12);
        // P(capital | canada) / P(capital) = 0.5 / (2/3)
        assert!((scores["capital"] - 0.75).abs() < 1e-12);
        assert!(scores["ottawa"] > scores["capital"]);
    }

    #[test]
    fn joint_scores_pair_frequency() {
        let (dict, store) = toy();
        let facts = vec![fact("Canada", "P36", "Ottawa"), fact("France", "P36", "Paris")];
        let records =
            predict(Baseline::Joint, &facts, &candidates_for(&facts), &dict, &store).unwrap();
        let scores = &records.iter().find(|r| r.uid == facts[1].uid).unwrap().scores;
        assert!((scores["paris"] - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(scores["ottawa"], 0.0);
    }

    #[test]
    fn unknown_subject_zeroes_dependent_scores() {
        let (dict, store) = toy();
        let facts = vec![fact("Far Away Unknown Kingdom", "P36", "Ottawa")];
        let candidates = candidates_for(&facts);
        for baseline in [Baseline::Joint, Baseline::Pmi] {
            let records = predict(baseline, &facts, &candidates, &dict, &store).unwrap();
            assert!(records[0].unknown);
            assert!(records[0].scores.values().all(|&s| s == 0.0));
        }
        let records =
            predict(Baseline::Marginal, &facts, &candidates, &dict, &store).unwrap();
        assert!(!records[0].unknown);
        assert!(records[0].scores["ottawa"] > 0.0);
    }

    #[test]
    fn out_of_vocabulary_candidate_scores_zero() {
        let (dict, store) = toy();
        let facts = vec![fact("Canada", "P36", "Ottawa"), fact("Canada", "P36", "Xyzzy")];
        let candidates = candidates_for(&facts);
        for baseline in ALL_BASELINES {
            let records = predict(baseline, &facts, &candidates, &dict, &store).unwrap();
            for r in &records {
                assert_eq!(r.scores["xyzzy"], 0.0, "{baseline:?}");
            }
        }
    }

    #[test]
    fn jsonl_roundtrips_through_evaluator_reader() {
        let (dict, store) = toy();
        let facts = vec![fact("Canada", "P36", "Ottawa"), fact("France", "P36", "Paris")];
        let records =
            predict(Baseline::Pmi, &facts, &candidates_for(&facts), &dict, &store).unwrap();
        let mut buf = Vec::new();
        write_predictions_jsonl(&records, &mut buf).unwrap();
        let parsed = PredictionSet::from_jsonl(buf.as_slice()).unwrap();
        assert_eq!(parsed.len(), 2);
        match parsed.get(&facts[0].uid).unwrap() {
            Prediction::Scores(map) => assert!((map["ottawa"] - 1.5).abs() < 1e-12),
            other => panic!("expected scores, got {other:?}"),
        }
    }

    #[test]
    fn empty_store_scores_zero_everywhere() {
        let (dict, _) = toy();
        let empty = CooccurrenceStore::empty(&dict);
        let facts = vec![fact("Canada", "P36", "Ottawa")];
        let candidates = candidates_for(&facts);
        for baseline in ALL_BASELINES {
            let records = predict(baseline, &facts, &candidates, &dict, &empty).unwrap();
            assert!(records[0].scores.values().all(|&s| s == 0.0), "{baseline:?}");
        }
    }
}
