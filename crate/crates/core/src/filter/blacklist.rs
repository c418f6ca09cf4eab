use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::io::{self, Write};
use std::path::Path;

const SHIPPED_SEED: &str = include_str!("../../data/seed_blacklist.tsv");

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlacklistEntry {
    pub label: String,
    pub external_id: Option<String>,
}

/// Entities that may appear in a subgraph but are never expanded.
///
/// An entry matches a query on `external_id` when both carry one, and on the
/// exact label otherwise.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Blacklist {
    entries: BTreeSet<BlacklistEntry>,
    ids: HashSet<String>,
    all_labels: HashSet<String>,
    labels_without_id: HashSet<String>,
}

impl Blacklist {
    pub fn new() -> Self {
        Self::default()
    }

    /// The seed list shipped with the crate (50 curated entities).
    pub fn shipped() -> Self {
        Self::parse(SHIPPED_SEED)
    }

    /// Parses `label<TAB>external_id` lines; the id column may be empty or
    /// missing. `#` lines are comments.
    pub fn parse(text: &str) -> Self {
        let mut b = Self::new();
        for line in text.lines() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (label, id) = line.split_once('\t').unwrap_or((line, ""));
            let label = label.trim();
            if label.is_empty() {
                continue;
            }
            let id = id.trim();
            b.insert(label, (!id.is_empty()).then_some(id));
        }
        b
    }

    pub fn load(path: &Path) -> io::Result<Self> {
        Ok(Self::parse(&fs::read_to_string(path)?))
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# label\texternal_id")?;
        for e in &self.entries {
            writeln!(w, "{}\t{}", e.label, e.external_id.as_deref().unwrap_or(""))?;
        }
        w.flush()
    }

    pub fn insert(&mut self, label: &str, external_id: Option<&str>) -> bool {
        let entry = BlacklistEntry {
            label: label.to_string(),
            external_id: external_id.map(str::to_string),
        };
        if !self.entries.insert(entry) {
            return false;
        }
        self.all_labels.insert(label.to_string());
        match external_id {
            Some(id) => {
                self.ids.insert(id.to_string());
            }
            None => {
                self.labels_without_id.insert(label.to_string());
            }
        }
        true
    }

    pub fn extend(&mut self, other: &Blacklist) {
        for e in &other.entries {
            self.insert(&e.label, e.external_id.as_deref());
        }
    }

    pub fn contains(&self, label: &str, external_id: Option<&str>) -> bool {
        match external_id {
            Some(id) => self.ids.contains(id) || self.labels_without_id.contains(label),
            None => self.all_labels.contains(label),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = &BlacklistEntry> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_subset(&self, other: &Blacklist) -> bool {
        self.entries.is_subset(&other.entries)
    }
}
