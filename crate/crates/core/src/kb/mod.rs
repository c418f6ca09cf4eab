//! Indexed, read-only triple store.
//!
//! A [`KnowledgeBase`] is built once by one of the ingestion adapters
//! ([`ingest_tsv`], [`ingest_wikidata_json`]) or loaded from a snapshot, and
//! is immutable afterwards, so it can be shared freely across threads.

mod snapshot;
mod tsv;
mod wikidata;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::io;

use rand::Rng;

use crate::Triple;

pub use snapshot::{read_snapshot, write_snapshot, SNAPSHOT_MAGIC, SNAPSHOT_VERSION};
pub use tsv::{export_tsv, ingest_tsv, ingest_tsv_reader};
pub use wikidata::{ingest_wikidata_json, ingest_wikidata_reader};

/// Category assigned to Wikidata items that are `instance of` human.
pub const HUMAN_CATEGORY: &str = "Human";

#[derive(Debug, thiserror::Error)]
pub enum KbError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path} does not look like a {format} file: {reason}")]
    Format {
        path: String,
        format: &'static str,
        reason: String,
    },
    #[error("invalid snapshot: {0}")]
    Snapshot(String),
    #[error("no seed available for category {0:?}")]
    NoSeedAvailable(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EntityRecord {
    pub label: String,
    pub external_id: Option<String>,
    pub categories: BTreeSet<String>,
}

/// Returns true for `Q` followed by one or more ASCII digits.
pub fn is_qid(id: &str) -> bool {
    id.strip_prefix('Q')
        .is_some_and(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
}

/// Counters produced by an ingestion run. Malformed input is reported here
/// rather than failing the run.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct IngestReport {
    pub lines: usize,
    pub loaded: usize,
    pub duplicates: usize,
    pub malformed: usize,
    pub skipped_values: usize,
    pub entities: usize,
}

#[derive(Debug, Default, Clone)]
pub struct KnowledgeBase {
    triples: Vec<Triple>,
    triple_set: HashSet<Triple>,
    subject_index: HashMap<String, Vec<usize>>,
    category_index: HashMap<String, Vec<String>>,
    entity_table: HashMap<String, EntityRecord>,
}

impl PartialEq for KnowledgeBase {
    fn eq(&self, other: &Self) -> bool {
        self.triples == other.triples
            && self.category_index == other.category_index
            && self.entity_table == other.entity_table
    }
}

impl KnowledgeBase {
    pub fn builder() -> KbBuilder {
        KbBuilder::default()
    }

    /// Convenience constructor used heavily by tests and fixtures.
    pub fn from_triples<I: IntoIterator<Item = Triple>>(triples: I) -> Self {
        let mut b = Self::builder();
        for t in triples {
            b.add_triple(t);
        }
        b.build()
    }

    /// All triples, deduplicated, in ingestion order.
    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triple_set.contains(triple)
    }

    /// Outgoing triples of `subject` in ingestion order; empty for unknown subjects.
    pub fn outgoing(&self, subject: &str) -> Vec<&Triple> {
        self.subject_index
            .get(subject)
            .map(|ix| ix.iter().map(|&i| &self.triples[i]).collect())
            .unwrap_or_default()
    }

    pub fn subjects(&self) -> impl Iterator<Item = &str> {
        self.subject_index.keys().map(String::as_str)
    }

    pub fn entity(&self, label: &str) -> Option<&EntityRecord> {
        self.entity_table.get(label)
    }

    pub fn entities(&self) -> impl Iterator<Item = &EntityRecord> {
        self.entity_table.values()
    }

    pub fn external_id(&self, label: &str) -> Option<&str> {
        self.entity_table.get(label)?.external_id.as_deref()
    }

    /// An entity is known if it has a record or at least one outgoing triple.
    pub fn has_entity(&self, label: &str) -> bool {
        self.entity_table.contains_key(label) || self.subject_index.contains_key(label)
    }

    pub fn category(&self, category: &str) -> &[String] {
        self.category_index.get(category).map(Vec::as_slice).unwrap_or_default()
    }

    pub fn categories(&self) -> impl Iterator<Item = (&str, usize)> {
        self.category_index.iter().map(|(c, v)| (c.as_str(), v.len()))
    }

    /// Uniform draw from the members of `category`.
    pub fn sample_seed<R: Rng + ?Sized>(&self, category: &str, rng: &mut R) -> Result<&str, KbError> {
        let members = self.category(category);
        if members.is_empty() {
            return Err(KbError::NoSeedAvailable(category.to_string()));
        }
        Ok(&members[rng.gen_range(0..members.len())])
    }
}

/// Accumulates triples and entity records, collapsing duplicates. Insertion
/// order is preserved in every index.
#[derive(Debug, Default)]
pub struct KbBuilder {
    kb: KnowledgeBase,
    duplicates: usize,
}

impl KbBuilder {
    /// Returns false when the triple was already present.
    pub fn add_triple(&mut self, triple: Triple) -> bool {
        if self.kb.triple_set.contains(&triple) {
            self.duplicates += 1;
            return false;
        }
        let idx = self.kb.triples.len();
        self.kb
            .subject_index
            .entry(triple.subject.clone())
            .or_default()
            .push(idx);
        self.kb.triple_set.insert(triple.clone());
        self.kb.triples.push(triple);
        true
    }

    /// Adds or merges an entity record.
    pub fn add_entity(&mut self, label: &str, external_id: Option<&str>) -> &mut EntityRecord {
        let rec = self
            .kb
            .entity_table
            .entry(label.to_string())
            .or_insert_with(|| EntityRecord {
                label: label.to_string(),
                ..Default::default()
            });
        if rec.external_id.is_none() {
            rec.external_id = external_id.filter(|id| is_qid(id)).map(str::to_string);
        }
        rec
    }

    pub fn add_category(&mut self, label: &str, category: &str) {
        let rec = self.add_entity(label, None);
        if rec.categories.insert(category.to_string()) {
            self.kb
                .category_index
                .entry(category.to_string())
                .or_default()
                .push(label.to_string());
        }
    }

    pub fn duplicates(&self) -> usize {
        self.duplicates
    }

    pub fn triple_count(&self) -> usize {
        self.kb.triples.len()
    }

    pub fn build(self) -> KnowledgeBase {
        self.kb
    }
}
