//! Batch toolkit for analysing how well a pretraining corpus lines up with
//! essay-scoring datasets, and for evaluating essay scorers.
//!
//! The crate is organised around three jobs:
//!
//! * **Alignment measurement** — tokenization and vocabulary divergence
//!   ([`lexalign`]), and syntactic complexity profiling over bracketed parse
//!   trees ([`synprof`]);
//! * **Scoring evaluation** — agreement/error metrics on a score scale
//!   ([`metrics`]), plus the split/transfer bookkeeping that turns raw
//!   per-run metric reports into transfer-advantage tables ([`harness`]);
//! * **Plumbing** — corpus loading and cleaning ([`corpus`]), a built-in
//!   ridge-regression scorer so the whole pipeline runs end to end
//!   ([`scorer`]), and deterministic seeded sampling ([`rng`]).
//!
//! The most commonly used types are re-exported at the crate root.

pub mod corpus;
pub mod error;
pub mod harness;
pub mod lexalign;
pub mod metrics;
pub mod rng;
pub mod scorer;
pub mod synprof;

pub use corpus::{
    clean_corpus, filter_by_cefr, load_corpus, sample_documents, write_corpus, CefrLevel,
    CleaningReport, Corpus, Document, FileFormat, ScoreScale, DEFAULT_MIN_CHARS,
};
pub use error::{Error, Result};
