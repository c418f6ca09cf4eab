//! Controlled k-hop subgraph extraction.
//!
//! Starting from a seed entity, every entity on the current frontier is
//! expanded once: its valid candidate triples (rule filter, then
//! subject–predicate uniqueness, and only if the entity is not blacklisted)
//! are sampled down to at most `m`, and the objects of the kept triples form
//! the next frontier. Expansion stops after `k` hops.

mod batch;
mod check;

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::filter::{no_expand, rule_and_sp_filtered, Blacklist, RuleSet};
use crate::kb::KnowledgeBase;
use crate::Triple;

pub use batch::{
    batch_extract, parse_recipe, BatchConfig, BatchError, BatchOutput, RecipeEntry, Shortfall, CE12K_PRESET,
    DEFAULT_RETRY_BUDGET,
};
pub use check::{verify_subgraph, Violation};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ExtractError {
    #[error("unknown seed entity {0:?}")]
    UnknownEntity(String),
    #[error("invalid extraction config: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionConfig {
    /// Maximum retained triples per expanded entity.
    pub m: usize,
    /// Maximum hop depth.
    pub k: usize,
    pub seed_category: String,
    pub rng_seed: u64,
}

impl ExtractionConfig {
    pub fn new(m: usize, k: usize) -> Self {
        Self {
            m,
            k,
            seed_category: crate::kb::HUMAN_CATEGORY.to_string(),
            rng_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), ExtractError> {
        if self.m == 0 || self.k == 0 {
            return Err(ExtractError::InvalidConfig(format!(
                "m and k must be >= 1 (got m={}, k={})",
                self.m, self.k
            )));
        }
        Ok(())
    }
}

/// An extracted subgraph. `hops[i]` is the hop at which `triples[i]` was
/// added. Serialises as one JSONL record of the subgraph file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgraph {
    pub seed: String,
    pub m: usize,
    pub k: usize,
    pub triples: Vec<Triple>,
    pub hops: Vec<usize>,
}

impl Subgraph {
    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// `{seed}` plus every subject and object.
    pub fn entities(&self) -> BTreeSet<&str> {
        let mut e: BTreeSet<&str> = self
            .triples
            .iter()
            .flat_map(|t| [t.subject.as_str(), t.object.as_str()])
            .collect();
        e.insert(&self.seed);
        e
    }

    pub fn hop_of(&self, triple: &Triple) -> Option<usize> {
        self.triples.iter().position(|t| t == triple).map(|i| self.hops[i])
    }

    /// Objects first reached at each hop (`N^(h)` for h = 1..=k), with the
    /// hop of first appearance.
    pub fn discovered(&self) -> Vec<(&str, usize)> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut order: Vec<usize> = (0..self.triples.len()).collect();
        order.sort_by_key(|&i| self.hops[i]);
        for i in order {
            let o = self.triples[i].object.as_str();
            if seen.insert(o) {
                out.push((o, self.hops[i]));
            }
        }
        out
    }

    /// Entities reachable from the seed along the subgraph's own edges.
    pub fn reachable(&self) -> HashSet<&str> {
        let mut adj: HashMap<&str, Vec<&str>> = HashMap::new();
        for t in &self.triples {
            adj.entry(&t.subject).or_default().push(&t.object);
        }
        let mut seen = HashSet::from([self.seed.as_str()]);
        let mut queue = VecDeque::from([self.seed.as_str()]);
        while let Some(v) = queue.pop_front() {
            for &w in adj.get(v).into_iter().flatten() {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }
}

/// Chooses which of `n` candidates to keep when at most `m` may be kept.
/// Returned indices are ascending.
pub trait NeighborSampler {
    fn choose(&mut self, n: usize, m: usize) -> Vec<usize>;
}

/// Uniform sampling without replacement.
pub struct RandomSampler<'r, R: Rng + ?Sized>(pub &'r mut R);

impl<R: Rng + ?Sized> NeighborSampler for RandomSampler<'_, R> {
    fn choose(&mut self, n: usize, m: usize) -> Vec<usize> {
        if n <= m {
            return (0..n).collect();
        }
        let mut ix = rand::seq::index::sample(self.0, n, m).into_vec();
        ix.sort_unstable();
        ix
    }
}

/// Keeps the first `m` candidates; used to compare against reference
/// implementations without randomness.
pub struct TakeFirst;

impl NeighborSampler for TakeFirst {
    fn choose(&mut self, n: usize, m: usize) -> Vec<usize> {
        (0..n.min(m)).collect()
    }
}

/// Extraction context over an immutable knowledge base.
#[derive(Clone, Copy)]
pub struct Extractor<'a> {
    kb: &'a KnowledgeBase,
    blacklist: &'a Blacklist,
    rules: &'a RuleSet,
}

impl<'a> Extractor<'a> {
    pub fn new(kb: &'a KnowledgeBase, blacklist: &'a Blacklist) -> Self {
        Self {
            kb,
            blacklist,
            rules: RuleSet::shipped(),
        }
    }

    pub fn with_rules(mut self, rules: &'a RuleSet) -> Self {
        self.rules = rules;
        self
    }

    pub fn kb(&self) -> &'a KnowledgeBase {
        self.kb
    }

    pub fn blacklist(&self) -> &'a Blacklist {
        self.blacklist
    }

    pub fn rules(&self) -> &'a RuleSet {
        self.rules
    }

    pub fn expandable(&self, entity: &str) -> bool {
        no_expand(self.blacklist, entity, self.kb.external_id(entity))
    }

    /// `F_valid(subject)`: empty when the subject is blacklisted, otherwise
    /// the rule-passing, subject–predicate-unique outgoing triples in order.
    pub fn valid_candidates(&self, subject: &str) -> Vec<&'a Triple> {
        if !self.expandable(subject) {
            return Vec::new();
        }
        rule_and_sp_filtered(self.rules, self.kb, subject)
    }

    pub fn extract<S: NeighborSampler>(
        &self,
        seed: &str,
        cfg: &ExtractionConfig,
        sampler: &mut S,
    ) -> Result<Subgraph, ExtractError> {
        cfg.validate()?;
        if !self.kb.has_entity(seed) {
            return Err(ExtractError::UnknownEntity(seed.to_string()));
        }
        let mut sg = Subgraph {
            seed: seed.to_string(),
            m: cfg.m,
            k: cfg.k,
            triples: Vec::new(),
            hops: Vec::new(),
        };
        let mut expanded: HashSet<&str> = HashSet::new();
        let mut present: HashSet<&Triple> = HashSet::new();
        let mut frontier: Vec<&str> = vec![seed];
        for hop in 1..=cfg.k {
            let mut next: Vec<&str> = Vec::new();
            let mut queued: HashSet<&str> = HashSet::new();
            for s in frontier {
                if !expanded.insert(s) {
                    continue;
                }
                let candidates = self.valid_candidates(s);
                for i in sampler.choose(candidates.len(), cfg.m) {
                    let t = candidates[i];
                    if present.insert(t) {
                        sg.triples.push(t.clone());
                        sg.hops.push(hop);
                    }
                    if queued.insert(&t.object) {
                        next.push(&t.object);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(sg)
    }
}

/// `F_valid(subject)` with the shipped rule set.
pub fn valid_candidates<'a>(kb: &'a KnowledgeBase, blacklist: &Blacklist, subject: &str) -> Vec<&'a Triple> {
    if !no_expand(blacklist, subject, kb.external_id(subject)) {
        return Vec::new();
    }
    rule_and_sp_filtered(RuleSet::shipped(), kb, subject)
}

/// Randomised extraction with the shipped rule set.
pub fn extract<R: Rng + ?Sized>(
    kb: &KnowledgeBase,
    blacklist: &Blacklist,
    seed: &str,
    cfg: &ExtractionConfig,
    rng: &mut R,
) -> Result<Subgraph, ExtractError> {
    Extractor::new(kb, blacklist).extract(seed, cfg, &mut RandomSampler(rng))
}
