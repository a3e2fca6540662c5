//! Document-frequency co-occurrence store.
//!
//! Counts are document-level with set semantics: a document contributes at
//! most 1 to each word, subject, and (subject, word) count no matter how
//! often the match repeats inside it. Shards counted against the same
//! dictionary merge by field-wise sum, so any grouping of the same document
//! multiset yields the identical store.

use std::collections::HashMap;
use std::io::{self, Write};
use std::path::Path;

use crate::corpus::{open_jsonl, DocLine};
use crate::dictionary::{EntityDictionary, SubjectId, WordId};
use crate::error::{io_data, Error, Result};
use crate::text;

const MAGIC: &[u8; 4] = b"COOC";
const VERSION: u16 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CooccurrenceStore {
    dict_hash: String,
    n_docs: u64,
    skipped: u64,
    word_df: Vec<u64>,
    subject_df: Vec<u64>,
    pairs: HashMap<u32, HashMap<u32, u64>>,
}

/// Result of a single (subject, word) probability lookup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairQuery {
    /// Subject missing from the dictionary or never seen in the corpus.
    Unknown,
    Known { pair_count: u64, cond_prob: f64, marginal_prob: f64 },
}

impl CooccurrenceStore {
    pub fn empty(dict: &EntityDictionary) -> Self {
        CooccurrenceStore {
            dict_hash: dict.hash().to_string(),
            n_docs: 0,
            skipped: 0,
            word_df: vec![0; dict.n_words()],
            subject_df: vec![0; dict.n_subjects()],
            pairs: HashMap::new(),
        }
    }

    pub fn dict_hash(&self) -> &str {
        &self.dict_hash
    }

    pub fn n_docs(&self) -> u64 {
        self.n_docs
    }

    pub fn skipped(&self) -> u64 {
        self.skipped
    }

    pub fn n_words(&self) -> usize {
        self.word_df.len()
    }

    pub fn n_subjects(&self) -> usize {
        self.subject_df.len()
    }

    pub fn word_df(&self, word: WordId) -> u64 {
        self.word_df[word.0 as usize]
    }

    pub fn subject_df(&self, subject: SubjectId) -> u64 {
        self.subject_df[subject.0 as usize]
    }

    pub fn pair_count(&self, subject: SubjectId, word: WordId) -> u64 {
        self.pairs
            .get(&subject.0)
            .and_then(|row| row.get(&word.0))
            .copied()
            .unwrap_or(0)
    }

    /// All nonzero pair counts, sorted by (subject id, word id).
    pub fn pairs_sorted(&self) -> Vec<(SubjectId, WordId, u64)> {
        let mut out: Vec<(SubjectId, WordId, u64)> = self
            .pairs
            .iter()
            .flat_map(|(&s, row)| {
                row.iter().map(move |(&w, &c)| (SubjectId(s), WordId(w), c))
            })
            .collect();
        out.sort_unstable_by_key(|&(s, w, _)| (s, w));
        out
    }

    /// Probability lookup. `subject: None` means the surface form was not in
    /// the dictionary; that and a zero subject document frequency both yield
    /// `Unknown`. An out-of-range word id is a caller bug.
    pub fn query(&self, subject: Option<SubjectId>, word: WordId) -> Result<PairQuery> {
        let w = word.0 as usize;
        if w >= self.word_df.len() {
            return Err(Error::internal(format!(
                "word id {w} out of range for store with {} words",
                self.word_df.len()
            )));
        }
        let Some(subject) = subject else {
            return Ok(PairQuery::Unknown);
        };
        let s = subject.0 as usize;
        if s >= self.subject_df.len() {
            return Err(Error::internal(format!(
                "subject id {s} out of range for store with {} subjects",
                self.subject_df.len()
            )));
        }
        let subject_docs = self.subject_df[s];
        if subject_docs == 0 {
            return Ok(PairQuery::Unknown);
        }
        let pair_count = self.pair_count(subject, word);
        Ok(PairQuery::Known {
            pair_count,
            cond_prob: pair_count as f64 / subject_docs as f64,
            // subject_docs >= 1 implies at least one document.
            marginal_prob: self.word_df[w] as f64 / self.n_docs as f64,
        })
    }

    /// Counts one shard of documents. Malformed records are tallied in
    /// `skipped`; read failures abort.
    pub fn count_shard<I>(docs: I, dict: &EntityDictionary) -> Result<Self>
    where
        I: IntoIterator<Item = io::Result<DocLine>>,
    {
        let mut store = Self::empty(dict);
        for line in docs {
            let line = line.map_err(|e| Error::data("corpus read failed").with_source(e))?;
            match line {
                DocLine::Malformed => store.skipped += 1,
                DocLine::Text(doc) => {
                    store.n_docs += 1;
                    let tokens = text::normalize(&doc);
                    let (wids, sids) = dict.match_document(&tokens);
                    for &w in &wids {
                        store.word_df[w.0 as usize] += 1;
                    }
                    for &s in &sids {
                        store.subject_df[s.0 as usize] += 1;
                        // No row without at least one pair: empty rows would
                        // break canonical bytes and the from_parts invariant.
                        if wids.is_empty() {
                            continue;
                        }
                        let row = store.pairs.entry(s.0).or_default();
                        for &w in &wids {
                            *row.entry(w.0).or_insert(0) += 1;
                        }
                    }
                }
            }
        }
        Ok(store)
    }

    pub fn count_jsonl_file(path: &Path, dict: &EntityDictionary) -> Result<Self> {
        Self::count_shard(open_jsonl(path)?, dict)
            .map_err(|e| Error::data(format!("counting {}", path.display())).with_source(e))
    }

    /// Merges shards by field-wise sum. All shards must carry the same
    /// dictionary hash; the result is independent of order and grouping.
    pub fn merge(stores: impl IntoIterator<Item = Self>) -> Result<Self> {
        let mut iter = stores.into_iter();
        let mut acc = iter
            .next()
            .ok_or_else(|| Error::usage("merge needs at least one shard"))?;
        for shard in iter {
            if shard.dict_hash != acc.dict_hash {
                return Err(Error::data(format!(
                    "dictionary hash mismatch: {} vs {}",
                    acc.dict_hash, shard.dict_hash
                )));
            }
            if shard.word_df.len() != acc.word_df.len()
                || shard.subject_df.len() != acc.subject_df.len()
            {
                return Err(Error::internal("equal dictionary hash but unequal table sizes"));
            }
            acc.n_docs += shard.n_docs;
            acc.skipped += shard.skipped;
            for (a, b) in acc.word_df.iter_mut().zip(&shard.word_df) {
                *a += b;
            }
            for (a, b) in acc.subject_df.iter_mut().zip(&shard.subject_df) {
                *a += b;
            }
            for (s, row) in shard.pairs {
                let acc_row = acc.pairs.entry(s).or_default();
                for (w, c) in row {
                    *acc_row.entry(w).or_insert(0) += c;
                }
            }
        }
        Ok(acc)
    }

    /// Reassembles a store from raw tables, enforcing the count invariants:
    /// every pair count is bounded by both of its marginals, every marginal
    /// by the document count, and no stored count is zero.
    pub fn from_parts(
        dict_hash: String,
        n_docs: u64,
        skipped: u64,
        word_df: Vec<u64>,
        subject_df: Vec<u64>,
        pairs: HashMap<u32, HashMap<u32, u64>>,
    ) -> Result<Self> {
        for (w, &c) in word_df.iter().enumerate() {
            if c > n_docs {
                return Err(Error::data(format!(
                    "word {w} document frequency {c} exceeds document count {n_docs}"
                )));
            }
        }
        for (s, &c) in subject_df.iter().enumerate() {
            if c > n_docs {
                return Err(Error::data(format!(
                    "subject {s} document frequency {c} exceeds document count {n_docs}"
                )));
            }
        }
        for (&s, row) in &pairs {
            if s as usize >= subject_df.len() {
                return Err(Error::data(format!("pair row for unknown subject id {s}")));
            }
            if row.is_empty() {
                return Err(Error::data(format!("empty pair row for subject id {s}")));
            }
            for (&w, &c) in row {
                if w as usize >= word_df.len() {
                    return Err(Error::data(format!("pair entry for unknown word id {w}")));
                }
                if c == 0 {
                    return Err(Error::data(format!("zero pair count stored for ({s}, {w})")));
                }
                if c > subject_df[s as usize] || c > word_df[w as usize] {
                    return Err(Error::data(format!(
                        "pair count {c} for ({s}, {w}) exceeds a marginal \
                         (subject {}, word {})",
                        subject_df[s as usize], word_df[w as usize]
                    )));
                }
            }
        }
        Ok(CooccurrenceStore { dict_hash, n_docs, skipped, word_df, subject_df, pairs })
    }

    /// Canonical binary serialization: little-endian, sorted records. Equal
    /// stores serialize to equal bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(self.dict_hash.len() as u32).to_le_bytes());
        out.extend_from_slice(self.dict_hash.as_bytes());
        out.extend_from_slice(&self.n_docs.to_le_bytes());
        out.extend_from_slice(&self.skipped.to_le_bytes());

        write_marginals(&mut out, &self.word_df);
        write_marginals(&mut out, &self.subject_df);

        let mut sids: Vec<u32> = self.pairs.keys().copied().collect();
        sids.sort_unstable();
        out.extend_from_slice(&(sids.len() as u32).to_le_bytes());
        for s in sids {
            let row = &self.pairs[&s];
            let mut wids: Vec<u32> = row.keys().copied().collect();
            wids.sort_unstable();
            out.extend_from_slice(&s.to_le_bytes());
            out.extend_from_slice(&(wids.len() as u32).to_le_bytes());
            for w in wids {
                out.extend_from_slice(&w.to_le_bytes());
                out.extend_from_slice(&row[&w].to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = ByteReader { bytes, pos: 0 };
        let magic = r.take(4)?;
        if magic != MAGIC {
            return Err(Error::data("not a co-occurrence store file (bad magic)"));
        }
        let version = r.u16()?;
        if version != VERSION {
            return Err(Error::data(format!("unsupported store version {version}")));
        }
        let hash_len = r.u32()? as usize;
        if hash_len > 1024 {
            return Err(Error::data("implausible dictionary hash length"));
        }
        let dict_hash = String::from_utf8(r.take(hash_len)?.to_vec())
            .map_err(|e| Error::data("dictionary hash is not UTF-8").with_source(e))?;
        let n_docs = r.u64()?;
        let skipped = r.u64()?;

        let word_df = read_marginals(&mut r)?;
        let subject_df = read_marginals(&mut r)?;

        let n_rows = r.u32()? as usize;
        let mut pairs: HashMap<u32, HashMap<u32, u64>> = HashMap::with_capacity(n_rows);
        let mut prev_sid: Option<u32> = None;
        for _ in 0..n_rows {
            let s = r.u32()?;
            if prev_sid.is_some_and(|p| p >= s) {
                return Err(Error::data("pair rows not sorted by subject id"));
            }
            prev_sid = Some(s);
            let n_cols = r.u32()? as usize;
            let mut row = HashMap::with_capacity(n_cols);
            let mut prev_wid: Option<u32> = None;
            for _ in 0..n_cols {
                let w = r.u32()?;
                if prev_wid.is_some_and(|p| p >= w) {
                    return Err(Error::data("pair entries not sorted by word id"));
                }
                prev_wid = Some(w);
                row.insert(w, r.u64()?);
            }
            pairs.insert(s, row);
        }
        if r.pos != bytes.len() {
            return Err(Error::data("trailing bytes after store payload"));
        }
        Self::from_parts(dict_hash, n_docs, skipped, word_df, subject_df, pairs)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.to_bytes()).map_err(|e| io_data(&tmp, e))?;
        std::fs::rename(&tmp, path).map_err(|e| io_data(path, e))
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| io_data(path, e))?;
        Self::from_bytes(&bytes)
            .map_err(|e| Error::data(format!("reading {}", path.display())).with_source(e))
    }

    /// Writes `subject<TAB>word<TAB>count` rows sorted by surface forms.
    pub fn export_tsv<W: Write>(&self, dict: &EntityDictionary, mut w: W) -> Result<()> {
        if dict.hash() != self.dict_hash {
            return Err(Error::data(format!(
                "store was counted against dictionary {}, not {}",
                self.dict_hash,
                dict.hash()
            )));
        }
        // Ids are assigned in sorted surface order, so id order is
        // lexicographic order.
        for (s, word, count) in self.pairs_sorted() {
            writeln!(w, "{}\t{}\t{}", dict.subject_surface(s), dict.word_token(word), count)
                .map_err(|e| Error::data("writing tsv export").with_source(e))?;
        }
        Ok(())
    }
}

fn write_marginals(out: &mut Vec<u8>, table: &[u64]) {
    out.extend_from_slice(&(table.len() as u32).to_le_bytes());
    let nonzero = table.iter().filter(|&&c| c > 0).count() as u32;
    out.extend_from_slice(&nonzero.to_le_bytes());
    for (id, &c) in table.iter().enumerate() {
        if c > 0 {
            out.extend_from_slice(&(id as u32).to_le_bytes());
            out.extend_from_slice(&c.to_le_bytes());
        }
    }
}

fn read_marginals(r: &mut ByteReader<'_>) -> Result<Vec<u64>> {
    let total = r.u32()? as usize;
    let nonzero = r.u32()? as usize;
    if nonzero > total {
        return Err(Error::data("more nonzero entries than table slots"));
    }
    let mut table = vec![0u64; total];
    let mut prev: Option<u32> = None;
    for _ in 0..nonzero {
        let id = r.u32()?;
        if prev.is_some_and(|p| p >= id) {
            return Err(Error::data("marginal entries not sorted by id"));
        }
        prev = Some(id);
        let slot = table
            .get_mut(id as usize)
            .ok_or_else(|| Error::data(format!("marginal entry for out-of-range id {id}")))?;
        *slot = r.u64()?;
        if *slot == 0 {
            return Err(Error::data("zero count stored as nonzero entry"));
        }
    }
    Ok(table)
}

struct ByteReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::data("store file truncated"))?;
        let slice = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(slice)
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::build_dictionary;

    fn docs(texts: &[&str]) -> Vec<io::Result<DocLine>> {
        texts.iter().map(|t| Ok(DocLine::Text(t.to_string()))).collect()
    }

    fn toy_dict() -> EntityDictionary {
        let subjects = vec!["Canada".into(), "France".into()];
        let words = vec!["Ottawa".into(), "Toronto".into(), "Paris".into(), "capital".into()];
        build_dictionary(&subjects, &words).unwrap().0
    }

    fn toy_store() -> (EntityDictionary, CooccurrenceStore) {
        let dict = toy_dict();
        let store = CooccurrenceStore::count_shard(
            docs(&[
                "Ottawa is the capital of Canada",
                "Toronto is in Canada",
                "Paris is the capital of France",
            ]),
            &dict,
        )
        .unwrap();
        (dict, store)
    }

    fn id_of_subject(dict: &EntityDictionary, s: &str) -> SubjectId {
        dict.subject_id(s).unwrap()
    }

    fn id_of_word(dict: &EntityDictionary, w: &str) -> WordId {
        dict.word_id(w).unwrap()
    }

    #[test]
    fn counts_match_hand_computation() {
        let (dict, store) = toy_store();
        let canada = id_of_subject(&dict, "Canada");
        let france = id_of_subject(&dict, "France");
        assert_eq!(store.n_docs(), 3);
        assert_eq!(store.skipped(), 0);
        assert_eq!(store.subject_df(canada), 2);
        assert_eq!(store.subject_df(france), 1);
        assert_eq!(store.word_df(id_of_word(&dict, "capital")), 2);
        assert_eq!(store.word_df(id_of_word(&dict, "ottawa")), 1);
        assert_eq!(store.pair_count(canada, id_of_word(&dict, "ottawa")), 1);
        assert_eq!(store.pair_count(canada, id_of_word(&dict, "toronto")), 1);
        assert_eq!(store.pair_count(canada, id_of_word(&dict, "capital")), 1);
        assert_eq!(store.pair_count(canada, id_of_word(&dict, "paris")), 0);
        assert_eq!(store.pair_count(france, id_of_word(&dict, "paris")), 1);
        assert_eq!(store.pair_count(france, id_of_word(&dict, "capital")), 1);
    }

    #[test]
    fn repeated_matches_in_one_document_count_once() {
        let dict = toy_dict();
        let store = CooccurrenceStore::count_shard(
            docs(&["Ottawa, Ottawa! Canada and Canada's Ottawa."]),
            &dict,
        )
        .unwrap();
        let canada = id_of_subject(&dict, "Canada");
        let ottawa = id_of_word(&dict, "ottawa");
        assert_eq!(store.subject_df(canada), 1);
        assert_eq!(store.word_df(ottawa), 1);
        assert_eq!(store.pair_count(canada, ottawa), 1);
    }

    #[test]
    fn subject_without_cooccurring_words_stores_no_pair_row() {
        let dict = toy_dict();
        // France appears only in documents with no vocabulary words.
        let store = CooccurrenceStore::count_shard(
            docs(&["France has wine", "France borders Belgium"]),
            &dict,
        )
        .unwrap();
        let france = id_of_subject(&dict, "France");
        assert_eq!(store.subject_df(france), 2);
        assert_eq!(store.pair_count(france, id_of_word(&dict, "paris")), 0);
        let restored = CooccurrenceStore::from_bytes(&store.to_bytes()).unwrap();
        assert_eq!(restored, store);
    }

    #[test]
    fn malformed_lines_are_tallied_not_fatal() {
        let dict = toy_dict();
        let lines = vec![
            Ok(DocLine::Text("Ottawa in Canada".into())),
            Ok(DocLine::Malformed),
            Ok(DocLine::Malformed),
        ];
        let store = CooccurrenceStore::count_shard(lines, &dict).unwrap();
        assert_eq!(store.n_docs(), 1);
        assert_eq!(store.skipped(), 2);
    }

    #[test]
    fn read_errors_abort() {
        let dict = toy_dict();
        let lines: Vec<io::Result<DocLine>> =
            vec![Err(io::Error::new(io::ErrorKind::BrokenPipe, "gone"))];
        assert!(CooccurrenceStore::count_shard(lines, &dict).is_err());
    }

    #[test]
    fn query_probabilities() {
        let (dict, store) = toy_store();
        let canada = id_of_subject(&dict, "Canada");
        match store.query(Some(canada), id_of_word(&dict, "ottawa")).unwrap() {
            PairQuery::Known { pair_count, cond_prob, marginal_prob } => {
                assert_eq!(pair_count, 1);
                assert_eq!(cond_prob, 0.5);
                assert!((marginal_prob - 1.0 / 3.0).abs() < 1e-12);
            }
            PairQuery::Unknown => panic!("expected known pair"),
        }
        // Word never co-occurring with the subject still yields a full answer.
        match store.query(Some(canada), id_of_word(&dict, "paris")).unwrap() {
            PairQuery::Known { pair_count, cond_prob, .. } => {
                assert_eq!(pair_count, 0);
                assert_eq!(cond_prob, 0.0);
            }
            PairQuery::Unknown => panic!("expected known pair"),
        }
    }

    #[test]
    fn query_unknown_subject() {
        let (dict, store) = toy_store();
        let ottawa = id_of_word(&dict, "ottawa");
        assert_eq!(store.query(None, ottawa).unwrap(), PairQuery::Unknown);

        // Subject present in the dictionary but absent from the corpus.
        let dict2 = build_dictionary(
            &["Canada".into(), "Atlantis".into()],
            &["Ottawa".into()],
        )
        .unwrap()
        .0;
        let store2 =
            CooccurrenceStore::count_shard(docs(&["Ottawa in Canada"]), &dict2).unwrap();
        let atlantis = dict2.subject_id("Atlantis").unwrap();
        assert_eq!(
            store2.query(Some(atlantis), dict2.word_id("Ottawa").unwrap()).unwrap(),
            PairQuery::Unknown
        );
    }

    #[test]
    fn query_out_of_range_word_is_internal_error() {
        let (_, store) = toy_store();
        let err = store.query(None, WordId(999)).unwrap_err();
        assert_eq!(err.kind(), crate::error::ErrorKind::Internal);
    }

    #[test]
    fn merge_sums_fields_and_checks_hash() {
        let dict = toy_dict();
        let a = CooccurrenceStore::count_shard(docs(&["Ottawa is the capital of Canada"]), &dict)
            .unwrap();
        let b = CooccurrenceStore::count_shard(
            docs(&["Toronto is in Canada", "Paris is the capital of France"]),
            &dict,
        )
        .unwrap();
        let (_, whole) = toy_store();
        let merged = CooccurrenceStore::merge([a.clone(), b.clone()]).unwrap();
        assert_eq!(merged, whole);
        let merged_rev = CooccurrenceStore::merge([b, a]).unwrap();
        assert_eq!(merged_rev, whole);

        let other_dict = build_dictionary(&["Chad".into()], &["Lake".into()]).unwrap().0;
        let foreign = CooccurrenceStore::empty(&other_dict);
        assert!(CooccurrenceStore::merge([whole, foreign]).is_err());
    }

    #[test]
    fn merge_of_nothing_is_an_error() {
        assert!(CooccurrenceStore::merge(Vec::new()).is_err());
    }

    #[test]
    fn bytes_roundtrip_and_are_canonical() {
        let (_, store) = toy_store();
        let bytes = store.to_bytes();
        let restored = CooccurrenceStore::from_bytes(&bytes).unwrap();
        assert_eq!(store, restored);
        assert_eq!(bytes, restored.to_bytes());
    }

    #[test]
    fn corrupt_bytes_rejected() {
        let (_, store) = toy_store();
        let bytes = store.to_bytes();

        let mut bad_magic = bytes.clone();
        bad_magic[0] = b'X';
        assert!(CooccurrenceStore::from_bytes(&bad_magic).is_err());

        assert!(CooccurrenceStore::from_bytes(&bytes[..bytes.len() - 3]).is_err());

        let mut trailing = bytes.clone();
        trailing.push(0);
        assert!(CooccurrenceStore::from_bytes(&trailing).is_err());
    }

    #[test]
    fn invariant_violations_rejected() {
        let (_, store) = toy_store();
        // A pair count exceeding its subject marginal.
        let mut pairs: HashMap<u32, HashMap<u32, u64>> = HashMap::new();
        pairs.entry(0).or_default().insert(0, 5);
        let err = CooccurrenceStore::from_parts(
            store.dict_hash().to_string(),
            3,
            0,
            vec![1; store.n_words()],
            vec![2; store.n_subjects()],
            pairs,
        )
        .unwrap_err();
        assert_eq!(err.kind(), crate::error::ErrorKind::Data);

        // A marginal exceeding the document count.
        assert!(CooccurrenceStore::from_parts(
            store.dict_hash().to_string(),
            1,
            0,
            vec![2; store.n_words()],
            vec![0; store.n_subjects()],
            HashMap::new(),
        )
        .is_err());
    }

    #[test]
    fn file_roundtrip() {
        let (_, store) = toy_store();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("counts.bin");
        store.write_file(&path).unwrap();
        assert_eq!(CooccurrenceStore::read_file(&path).unwrap(), store);
    }

    #[test]
    fn tsv_export_is_sorted_by_surface() {
        let (dict, store) = toy_store();
        let mut out = Vec::new();
        store.export_tsv(&dict, &mut out).unwrap();
        let tsv = String::from_utf8(out).unwrap();
        assert_eq!(
            tsv,
            "canada\tcapital\t1\n\
             canada\tottawa\t1\n\
             canada\ttoronto\t1\n\
             france\tcapital\t1\n\
             france\tparis\t1\n"
        );
    }

    #[test]
    fn tsv_export_rejects_foreign_dictionary() {
        let (_, store) = toy_store();
        let other = build_dictionary(&["Chad".into()], &["Lake".into()]).unwrap().0;
        assert!(store.export_tsv(&other, Vec::new()).is_err());
    }
}
