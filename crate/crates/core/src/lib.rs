//! Tooling for corpora of short symbolic inscriptions.
//!
//! - [`corpus`]: sign inventory and inscription model, TSV ingestion, reading order.
//! - [`grammar`]: Prefix / Medial / Core / Terminal segmentation and the patterned-text generator.
//! - [`stats`]: bigram Markov model, n-gram tables, block entropy.
//! - [`economy`]: quantity readings, duplicate clusters, seal-minted tokens, ration tables.
//! - [`report`]: CSV and SVG output.
//! - [`cli`]: the `sealscript` command.

#![forbid(unsafe_code)]

pub mod cli;
pub mod corpus;
pub mod economy;
pub mod error;
pub mod grammar;
pub mod report;
pub mod stats;

pub use corpus::{
    corpus_summary, load_corpus, load_inventory, normalize_reading_order, Corpus, Inscription,
    Liters, ObjectType, Sign, SignClass, SignInventory, SourceDirection,
};
pub use economy::{
    find_duplicate_clusters, mint_tokens, read_quantity, tabulate_rations, DuplicateCluster,
    GroupBy, RationTable, TokenRecord, VolumetricReading,
};
pub use error::{Error, Result};
pub use grammar::{
    classify_corpus, generate, label_roles, load_grammar, segment, Classification, Component,
    GrammarSpec, Segmentation, SignSet,
};
pub use stats::{
    block_entropy, fit_bigram, generate_sequence, ngram_counts, EntropyProfile, Estimator,
    NGramTable, Normalization, SequenceKind, Symbol, TransitionModel,
};
