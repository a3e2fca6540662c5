//! Train-set filtering that removes frequency-driven shortcuts.
//!
//! For each relation, the most corpus-predictable share of the train facts
//! is discarded: either the facts whose gold object co-occurs most
//! conditionally with their subject (`BiasScore`), or a uniformly random
//! sample of the same size (`Random`), the control. Test facts always pass
//! through untouched.

use std::collections::{BTreeMap, HashSet};
use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::dataset::{FactTriple, Split};
use crate::dictionary::EntityDictionary;
use crate::error::{Error, Result};
use crate::hashing::derive_seed;
use crate::store::{CooccurrenceStore, PairQuery};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterStrategy {
    /// Discard the facts with the highest bias score.
    BiasScore,
    /// Discard a seeded uniform sample; size-matched control.
    Random,
}

impl FilterStrategy {
    pub fn as_str(self) -> &'static str {
        match self {
            FilterStrategy::BiasScore => "bias-score",
            FilterStrategy::Random => "random",
        }
    }
}

impl std::str::FromStr for FilterStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bias-score" => Ok(FilterStrategy::BiasScore),
            "random" => Ok(FilterStrategy::Random),
            other => Err(Error::usage(format!(
                "unknown filter strategy {other:?} (bias-score|random)"
            ))),
        }
    }
}

/// How predictable a fact's object is from raw co-occurrence:
/// P(object | subject) in the counting corpus. `None` when the subject or
/// object has no usable statistics.
pub fn score_bias(
    fact: &FactTriple,
    dict: &EntityDictionary,
    store: &CooccurrenceStore,
) -> Result<Option<f64>> {
    let Some(wid) = dict.word_id(&fact.object) else {
        return Ok(None);
    };
    match store.query(dict.subject_id(&fact.subject), wid)? {
        PairQuery::Unknown => Ok(None),
        PairQuery::Known { cond_prob, .. } => Ok(Some(cond_prob)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscardedFact {
    pub uid: String,
    pub relation_id: String,
    pub score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterOutcome {
    /// Input facts minus the discarded ones, original order preserved.
    pub kept: Vec<FactTriple>,
    /// Discarded train facts, sorted by (relation, uid).
    pub discarded: Vec<DiscardedFact>,
}

/// Discards floor(ratio * n_r) train facts from every relation r.
/// `ratio` must lie in [0, 1). `seed` feeds the random strategy only.
pub fn filter(
    facts: &[FactTriple],
    strategy: FilterStrategy,
    ratio: f64,
    seed: u64,
    dict: &EntityDictionary,
    store: &CooccurrenceStore,
) -> Result<FilterOutcome> {
    if !(0.0..1.0).contains(&ratio) {
        return Err(Error::usage(format!("filter ratio {ratio} outside [0, 1)")));
    }

    struct Candidate {
        uid: String,
        relation_id: String,
        score: Option<f64>,
    }
    let mut by_relation: BTreeMap<&str, Vec<Candidate>> = BTreeMap::new();
    for fact in facts {
        if fact.split != Split::Train {
            continue;
        }
        by_relation.entry(&fact.relation_id).or_default().push(Candidate {
            uid: fact.uid.clone(),
            relation_id: fact.relation_id.clone(),
            score: score_bias(fact, dict, store)?,
        });
    }

    let mut discarded: Vec<DiscardedFact> = Vec::new();
    for (relation_id, mut candidates) in by_relation {
        let k = (ratio * candidates.len() as f64).floor() as usize;
        // Unknown scores order as 0.0: facts without statistics are the
        // least corpus-predictable and go last.
        candidates.sort_by(|a, b| {
            let (sa, sb) = (a.score.unwrap_or(0.0), b.score.unwrap_or(0.0));
            sb.partial_cmp(&sa).expect("probabilities are finite").then(a.uid.cmp(&b.uid))
        });
        let chosen: Vec<usize> = match strategy {
            FilterStrategy::BiasScore => (0..k).collect(),
            FilterStrategy::Random => {
                // Sample over the uid-sorted list so the draw is independent
                // of score ordering details.
                candidates.sort_by(|a, b| a.uid.cmp(&b.uid));
                let mut rng =
                    ChaCha20Rng::from_seed(derive_seed("debias-random", seed, relation_id));
                let mut idx =
                    rand::seq::index::sample(&mut rng, candidates.len(), k).into_vec();
                idx.sort_unstable();
                idx
            }
        };
        for i in chosen {
            let c = &candidates[i];
            discarded.push(DiscardedFact {
                uid: c.uid.clone(),
                relation_id: c.relation_id.clone(),
                score: c.score,
            });
        }
    }
    discarded.sort_by(|a, b| (&a.relation_id, &a.uid).cmp(&(&b.relation_id, &b.uid)));

    let drop: HashSet<&str> = discarded.iter().map(|d| d.uid.as_str()).collect();
    let kept = facts.iter().filter(|f| !drop.contains(f.uid.as_str())).cloned().collect();
    Ok(FilterOutcome { kept, discarded })
}

/// `uid,relation_id,score,strategy,seed` rows; the seed cell is filled only
/// for the random strategy, the score cell only when statistics existed.
pub fn write_discard_csv<W: Write>(
    outcome: &FilterOutcome,
    strategy: FilterStrategy,
    seed: u64,
    mut w: W,
) -> Result<()> {
    let io = |e| Error::data("writing discard manifest").with_source(e);
    writeln!(w, "uid,relation_id,score,strategy,seed").map_err(io)?;
    let seed_cell = match strategy {
        FilterStrategy::BiasScore => String::new(),
        FilterStrategy::Random => seed.to_string(),
    };
    for d in &outcome.discarded {
        let score = d.score.map(|s| format!("{s:.6}")).unwrap_or_default();
        writeln!(w, "{},{},{},{},{}", d.uid, d.relation_id, score, strategy.as_str(), seed_cell)
            .map_err(io)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::DocLine;
    use crate::dataset::compute_uid;
    use crate::dictionary::build_dictionary;

    fn fact(subject: &str, relation_id: &str, object: &str, split: Split) -> FactTriple {
        FactTriple {
            uid: compute_uid(subject, relation_id, object),
            subject: subject.into(),
            relation_id: relation_id.into(),
            object: object.into(),
            split,
        }
    }

    /// Ten subjects s0..s9 whose bias scores (10-i)/(11-i) are distinct and
    /// strictly decreasing in i.
    fn graded_world() -> (EntityDictionary, CooccurrenceStore, Vec<FactTriple>) {
        let subjects: Vec<String> = (0..10).map(|i| format!("s{i}")).collect();
        let words = vec!["w".to_string(), "z".to_string()];
        let dict = build_dictionary(&subjects, &words).unwrap().0;
        // Document j contains w plus every subject si with i <= j; si then
        // appears in docs j >= i, i.e. 10 - i docs, and co-occurs with w in
        // all of them. Every subject also appears alone with z once so
        // conditional probabilities differ: P(w | si) = (10-i) / (11-i).
        let mut docs: Vec<std::io::Result<DocLine>> = Vec::new();
        for j in 0..10 {
            let mut text = String::from("w");
            for i in 0..=j {
                text.push_str(&format!(" s{i}"));
            }
            docs.push(Ok(DocLine::Text(text)));
        }
        for i in 0..10 {
            docs.push(Ok(DocLine::Text(format!("z s{i}"))));
        }
        let store = CooccurrenceStore::count_shard(docs, &dict).unwrap();
        let facts: Vec<FactTriple> =
            (0..10).map(|i| fact(&format!("s{i}"), "P17", "w", Split::Train)).collect();
        (dict, store, facts)
    }

    #[test]
    fn bias_score_is_conditional_probability() {
        let (dict, store, facts) = graded_world();
        // s0 appears in all 10 w-docs plus one z-doc.
        let s = score_bias(&facts[0], &dict, &store).unwrap().unwrap();
        assert!((s - 10.0 / 11.0).abs() < 1e-12);
        let s9 = score_bias(&facts[9], &dict, &store).unwrap().unwrap();
        assert!((s9 - 1.0 / 2.0).abs() < 1e-12);

        let ghost = fact("unseen subject thing", "P17", "w", Split::Train);
        assert_eq!(score_bias(&ghost, &dict, &store).unwrap(), None);
    }

    #[test]
    fn kept_counts_match_floor() {
        let (dict, store, mut facts) = graded_world();
        facts.push(fact("s0", "P19", "z", Split::Train));
        facts.push(fact("s1", "P19", "z", Split::Train));
        facts.push(fact("s2", "P19", "z", Split::Train));
        for ratio in [0.1, 0.3, 0.5] {
            let out =
                filter(&facts, FilterStrategy::BiasScore, ratio, 0, &dict, &store).unwrap();
            for (rel, n) in [("P17", 10usize), ("P19", 3usize)] {
                let discarded =
                    out.discarded.iter().filter(|d| d.relation_id == rel).count();
                assert_eq!(discarded, (ratio * n as f64).floor() as usize, "{rel} at {ratio}");
            }
            assert_eq!(out.kept.len() + out.discarded.len(), facts.len());
        }
    }

    #[test]
    fn bias_strategy_discards_dominating_scores() {
        let (dict, store, facts) = graded_world();
        let out = filter(&facts, FilterStrategy::BiasScore, 0.3, 0, &dict, &store).unwrap();
        assert_eq!(out.discarded.len(), 3);
        let min_discarded = out
            .discarded
            .iter()
            .map(|d| d.score.unwrap_or(0.0))
            .fold(f64::INFINITY, f64::min);
        let max_kept = out
            .kept
            .iter()
            .map(|f| score_bias(f, &dict, &store).unwrap().unwrap_or(0.0))
            .fold(0.0, f64::max);
        assert!(min_discarded >= max_kept);
        // Highest conditional probabilities belong to s0, s1, s2.
        let mut uids: Vec<&str> = out.discarded.iter().map(|d| d.uid.as_str()).collect();
        uids.sort_unstable();
        let mut expect: Vec<&str> = facts[..3].iter().map(|f| f.uid.as_str()).collect();
        expect.sort_unstable();
        assert_eq!(uids, expect);
    }

    #[test]
    fn random_strategy_is_seeded() {
        let (dict, store, facts) = graded_world();
        let a = filter(&facts, FilterStrategy::Random, 0.5, 7, &dict, &store).unwrap();
        let b = filter(&facts, FilterStrategy::Random, 0.5, 7, &dict, &store).unwrap();
        assert_eq!(a, b);
        let c = filter(&facts, FilterStrategy::Random, 0.5, 8, &dict, &store).unwrap();
        assert_eq!(c.discarded.len(), 5);
        assert_ne!(
            a.discarded.iter().map(|d| &d.uid).collect::<Vec<_>>(),
            c.discarded.iter().map(|d| &d.uid).collect::<Vec<_>>(),
            "different seeds should draw different samples"
        );
    }

    #[test]
    fn test_split_passes_through() {
        let (dict, store, mut facts) = graded_world();
        for f in facts.iter_mut().take(5) {
            f.split = Split::Test;
        }
        let out = filter(&facts, FilterStrategy::BiasScore, 0.5, 0, &dict, &store).unwrap();
        // Only the 5 train facts are candidates: floor(0.5 * 5) = 2 discards.
        assert_eq!(out.discarded.len(), 2);
        assert!(out
            .kept
            .iter()
            .filter(|f| f.split == Split::Test)
            .count() == 5);
    }

    #[test]
    fn ratio_one_rejected() {
        let (dict, store, facts) = graded_world();
        assert!(filter(&facts, FilterStrategy::BiasScore, 1.0, 0, &dict, &store).is_err());
        assert!(filter(&facts, FilterStrategy::BiasScore, -0.1, 0, &dict, &store).is_err());
    }

    #[test]
    fn discard_csv_format() {
        let (dict, store, facts) = graded_world();
        let out = filter(&facts, FilterStrategy::Random, 0.2, 42, &dict, &store).unwrap();
        let mut buf = Vec::new();
        write_discard_csv(&out, FilterStrategy::Random, 42, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "uid,relation_id,score,strategy,seed");
        assert_eq!(lines.len(), 1 + out.discarded.len());
        for line in &lines[1..] {
            assert!(line.ends_with(",random,42"), "{line}");
        }
    }
}
