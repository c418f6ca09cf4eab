//! Controlled knowledge-graph subgraph extraction, (text, KG) dataset
//! assembly and alignment-based graph evaluation.
//!
//! The crate is organised along the pipeline:
//!
//! * [`kb`] ingests triple dumps into an indexed, read-only store.
//! * [`filter`] holds the inline triple/entity filters used during traversal.
//! * [`extract`] performs m-bounded, k-hop subgraph extraction and re-verification.
//! * [`curate`] grows the entity-expansion blacklist with an LLM judge.
//! * [`synth`] renders prompts, generates texts and writes dataset splits.
//! * [`metrics`] implements G-BLEU, G-ROUGE, G-BERTScore and BERTScore.
//! * [`stats`] covers dataset summaries, Wasserstein-1, bootstrap CIs and Wilcoxon tests.

pub mod curate;
pub mod extract;
pub mod filter;
pub mod jsonl;
pub mod kb;
pub mod llm;
pub mod metrics;
pub mod par;
pub mod prompts;
pub mod rng;
pub mod stats;
pub mod synth;
mod triple;

pub use triple::{format_triple_list, parse_triple_list, Triple, TripleError};
