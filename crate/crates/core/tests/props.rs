//! Property tests for the invariants the pipeline promises: tokenizer
//! idempotence, count bounds, serialization roundtrips, split determinism,
//! monotone-transform invariance of ranking, and bin totality.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use proptest::prelude::*;

use cooc_core::analysis::{assign_bin, BIN_COUNT};
use cooc_core::baselines::{predict, ALL_BASELINES};
use cooc_core::corpus::DocLine;
use cooc_core::dataset::{
    build_alternate_gold_index, build_candidate_set, compute_uid, split, CandidateMode,
    FactDraft, FactTriple, Split,
};
use cooc_core::dictionary::build_dictionary;
use cooc_core::eval::{evaluate, Prediction, PredictionSet};
use cooc_core::store::CooccurrenceStore;
use cooc_core::text::{is_stopword, normalize, tokenize};

proptest! {
    #[test]
    fn tokenize_is_idempotent(s in "[a-zA-Z0-9' .,!?–-]{0,80}") {
        let once = tokenize(&s);
        let again = tokenize(&once.join(" "));
        prop_assert_eq!(once, again);
    }

    #[test]
    fn tokenize_is_idempotent_on_arbitrary_strings(s in any::<String>()) {
        let once = tokenize(&s);
        let again = tokenize(&once.join(" "));
        prop_assert_eq!(once, again);
    }

    #[test]
    fn normalize_output_is_clean(s in any::<String>()) {
        let tokens = normalize(&s);
        for t in &tokens {
            prop_assert!(!t.is_empty());
            prop_assert_eq!(t.clone(), t.to_lowercase());
            prop_assert!(!is_stopword(t), "stopword {} survived", t);
        }
        let again = normalize(&tokens.join(" "));
        prop_assert_eq!(tokens, again);
    }

    #[test]
    fn bin_assignment_is_total_on_unit_interval(v in 0.0f64..=1.0) {
        let bin = assign_bin(v).unwrap();
        prop_assert!(bin < BIN_COUNT);
    }

    #[test]
    fn bin_assignment_rejects_out_of_range(v in any::<f64>()) {
        let result = assign_bin(v);
        if (0.0..=1.0).contains(&v) {
            prop_assert!(result.is_ok());
        } else {
            prop_assert!(result.is_err());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn store_serialization_roundtrips(seed in any::<u64>()) {
        let world = common::generate_world(seed, 60);
        let (dict, _) = build_dictionary(&world.subject_pool, &world.word_pool).unwrap();
        let store = CooccurrenceStore::count_shard(
            world.docs.iter().map(|d| Ok(DocLine::Text(d.clone()))),
            &dict,
        )
        .unwrap();

        let bytes = store.to_bytes();
        let back = CooccurrenceStore::from_bytes(&bytes).unwrap();
        prop_assert_eq!(&back, &store);
        prop_assert_eq!(back.to_bytes(), bytes);
    }

    #[test]
    fn split_is_deterministic_and_sized_by_floor(
        pairs in proptest::collection::btree_set((0usize..5, 0usize..40), 0..120),
        ratio in 0.0f64..=1.0,
        seed in any::<u64>(),
    ) {
        let drafts: Vec<FactDraft> = pairs
            .iter()
            .map(|&(r, o)| {
                let relation_id = format!("P{r}");
                let subject = format!("subject {o}");
                let object = format!("object{o}");
                FactDraft {
                    uid: compute_uid(&subject, &relation_id, &object),
                    subject,
                    relation_id,
                    object,
                }
            })
            .collect();

        let facts = split(drafts.clone(), ratio, seed).unwrap();
        prop_assert_eq!(facts.len(), drafts.len());

        // same facts, same relative order, only split labels added
        for (d, f) in drafts.iter().zip(&facts) {
            prop_assert_eq!(&d.uid, &f.uid);
        }

        let mut per_relation: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for f in &facts {
            let e = per_relation.entry(&f.relation_id).or_insert((0, 0));
            e.0 += 1;
            if f.split == Split::Train {
                e.1 += 1;
            }
        }
        for (_, (n, train)) in &per_relation {
            prop_assert_eq!(*train, (ratio * *n as f64).floor() as usize);
        }

        let again = split(drafts, ratio, seed).unwrap();
        prop_assert_eq!(facts, again);
    }

    #[test]
    fn relation_wise_candidates_are_subsets_of_global(
        pairs in proptest::collection::btree_set((0usize..4, 0usize..25), 1..60),
    ) {
        let facts: Vec<FactTriple> = pairs
            .iter()
            .map(|&(r, o)| {
                let relation_id = format!("P{r}");
                let subject = format!("subject {o}");
                let object = format!("object{o}");
                FactTriple {
                    uid: compute_uid(&subject, &relation_id, &object),
                    subject,
                    relation_id,
                    object,
                    split: Split::Test,
                }
            })
            .collect();

        let global = build_candidate_set(&facts, CandidateMode::GoldObjects, &[]);
        let relwise =
            build_candidate_set(&facts, CandidateMode::GoldObjectsRelationWise, &[]);

        let global_members: BTreeSet<&String> = global.members("P0").iter().collect();
        for r in 0..4 {
            let relation_id = format!("P{r}");
            let members = relwise.members(&relation_id);
            for (i, token) in members.iter().enumerate() {
                prop_assert!(global_members.contains(token));
                prop_assert_eq!(relwise.token_id(&relation_id, token), Some(i));
            }
            // sorted and duplicate-free
            for w in members.windows(2) {
                prop_assert!(w[0] < w[1]);
            }
        }
        for fact in &facts {
            prop_assert!(relwise.token_id(&fact.relation_id, &fact.object.to_lowercase()).is_some());
        }
    }

    #[test]
    fn evaluation_is_invariant_under_monotone_transforms(
        gold_choices in proptest::collection::btree_set((0usize..6, 0usize..8), 1..30),
        raw_scores in proptest::collection::vec(-100i32..=100, 8),
        slope in 1i64..=7,
        intercept in -50i64..=50,
    ) {
        let objects: Vec<String> = (0..8).map(|o| format!("object{o}")).collect();
        let facts: Vec<FactTriple> = gold_choices
            .iter()
            .map(|&(s, o)| {
                let subject = format!("subject {s}");
                FactTriple {
                    uid: compute_uid(&subject, "P1", &objects[o]),
                    subject,
                    relation_id: "P1".into(),
                    object: objects[o].clone(),
                    split: Split::Test,
                }
            })
            .collect();
        let candidates = build_candidate_set(&facts, CandidateMode::GoldObjects, &[]);
        let alternates = build_alternate_gold_index(&facts);

        let mut base = PredictionSet::default();
        let mut transformed = PredictionSet::default();
        for fact in &facts {
            let mut lo: HashMap<String, f64> = HashMap::new();
            let mut hi: HashMap<String, f64> = HashMap::new();
            for token in candidates.members(&fact.relation_id) {
                // token index keys the raw score so duplicates keep ties
                let idx = candidates.token_id(&fact.relation_id, token).unwrap();
                let raw = raw_scores[idx % raw_scores.len()] as i64;
                lo.insert(token.clone(), raw as f64);
                hi.insert(token.clone(), (slope * raw + intercept) as f64);
            }
            base.insert(fact.uid.clone(), Prediction::Scores(lo)).unwrap();
            transformed.insert(fact.uid.clone(), Prediction::Scores(hi)).unwrap();
        }

        let a = evaluate(&facts, &base, &candidates, &alternates).unwrap();
        let b = evaluate(&facts, &transformed, &candidates, &alternates).unwrap();
        prop_assert_eq!(&a.outcomes, &b.outcomes);
        prop_assert_eq!(a.overall, b.overall);

        // micro metrics stay coupled: hits@1 can never exceed MRR
        prop_assert!(a.overall.hits1 <= a.overall.mrr + 1e-12);
        prop_assert!(a.overall.mrr <= 1.0 + 1e-12);
        for o in &a.outcomes {
            prop_assert!(o.rank >= 1);
            prop_assert!((o.rr - 1.0 / o.rank as f64).abs() < 1e-12);
            prop_assert_eq!(o.hits1, o.rank == 1);
        }
    }

    #[test]
    fn baseline_scores_are_invariant_under_corpus_duplication(
        seed in any::<u64>(),
        copies in 2usize..=4,
    ) {
        let world = common::generate_world(seed, 40);
        prop_assume!(!world.docs.is_empty());
        let (dict, _) = build_dictionary(&world.subject_pool, &world.word_pool).unwrap();

        let single = CooccurrenceStore::count_shard(
            world.docs.iter().map(|d| Ok(DocLine::Text(d.clone()))),
            &dict,
        )
        .unwrap();
        let repeated = CooccurrenceStore::count_shard(
            world
                .docs
                .iter()
                .cycle()
                .take(world.docs.len() * copies)
                .map(|d| Ok(DocLine::Text(d.clone()))),
            &dict,
        )
        .unwrap();
        prop_assert_eq!(repeated.n_docs(), single.n_docs() * copies as u64);

        let subjects: Vec<String> = dict.subject_surfaces().take(4).map(str::to_string).collect();
        let objects: Vec<String> = dict.word_tokens().take(4).map(str::to_string).collect();
        prop_assume!(!subjects.is_empty() && objects.len() >= 2);
        let mut facts = Vec::new();
        for s in &subjects {
            for o in &objects {
                facts.push(FactTriple {
                    uid: compute_uid(s, "P1", o),
                    subject: s.clone(),
                    relation_id: "P1".into(),
                    object: o.clone(),
                    split: Split::Test,
                });
            }
        }
        let candidates = build_candidate_set(&facts, CandidateMode::GoldObjects, &[]);

        for baseline in ALL_BASELINES {
            let a = predict(baseline, &facts, &candidates, &dict, &single).unwrap();
            let b = predict(baseline, &facts, &candidates, &dict, &repeated).unwrap();
            prop_assert_eq!(
                serde_json::to_string(&a).unwrap(),
                serde_json::to_string(&b).unwrap(),
                "baseline {} changed under duplication",
                baseline.as_str()
            );
        }
    }
}
