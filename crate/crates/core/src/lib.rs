//! Core library for document-level subject/word co-occurrence statistics
//! and rank-based evaluation of factual probing predictions.
//!
//! Pipeline shape: build an entity dictionary, count a sharded corpus into a
//! mergeable [`store::CooccurrenceStore`], prepare a probing dataset with
//! cloze renderings, score term-frequency baselines, evaluate prediction
//! files, and break results down by co-occurrence frequency bins. A
//! train-set filter for frequency-driven shortcuts rounds out the toolkit.
//!
//! Everything is deterministic: identifiers are dense ranks in sorted
//! order, randomness flows from explicit seeds, and serialized artifacts
//! are canonical (equal values produce equal bytes).

pub mod analysis;
pub mod baselines;
pub mod corpus;
pub mod dataset;
pub mod debias;
pub mod dictionary;
pub mod error;
pub mod eval;
pub mod hashing;
pub mod store;
pub mod text;

pub use error::{Error, ErrorKind, Result};
