//! LLM-assisted growth of the entity-expansion blacklist.
//!
//! Candidates are gathered by running traversals from random seeds and
//! sampling among the entities they discover. Each candidate's outgoing
//! triples are then shown to an [`Evaluator`]; a strict `YES` adds the
//! entity to the blacklist.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::extract::{ExtractionConfig, Extractor, RandomSampler};
use crate::filter::Blacklist;
use crate::kb::{KbError, KnowledgeBase};
use crate::llm::{ChatClient, LlmError};
use crate::prompts::render_non_informative_prompt;
use crate::{rng, Triple};

/// Outgoing triples shown to the evaluator are cut to this many.
pub const DEFAULT_MAX_TRIPLES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub traversal: usize,
    pub hop: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CandidateSet {
    entities: Vec<String>,
    provenance: HashMap<String, (String, Provenance)>,
}

impl CandidateSet {
    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    /// `(seed, provenance)` of the traversal that first contributed `entity`.
    pub fn provenance(&self, entity: &str) -> Option<(&str, Provenance)> {
        self.provenance.get(entity).map(|(s, p)| (s.as_str(), *p))
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    fn push(&mut self, entity: &str, seed: &str, prov: Provenance) -> bool {
        if self.provenance.contains_key(entity) {
            return false;
        }
        self.entities.push(entity.to_string());
        self.provenance.insert(entity.to_string(), (seed.to_string(), prov));
        true
    }
}

/// What the evaluator is asked about one entity.
#[derive(Debug, Clone)]
pub struct EvalRequest<'a> {
    pub entity: &'a str,
    pub external_id: Option<&'a str>,
    pub triples: &'a [Triple],
    pub prompt: &'a str,
}

pub trait Evaluator: Send + Sync {
    /// Returns the raw model response.
    fn judge(&self, request: &EvalRequest<'_>) -> Result<String, LlmError>;
}

/// Sends the rendered prompt to a chat endpoint.
pub struct ChatEvaluator<C>(pub C);

impl<C: ChatClient> Evaluator for ChatEvaluator<C> {
    fn judge(&self, request: &EvalRequest<'_>) -> Result<String, LlmError> {
        self.0.complete(request.prompt)
    }
}

/// Offline evaluator: answers YES iff every rule-passing triple has a
/// predicate from a fixed set. Triples the rule filter rejects are never
/// emitted, so they do not count as informative.
#[derive(Debug, Clone)]
pub struct RuleStubEvaluator {
    pub trivial_predicates: HashSet<String>,
}

impl RuleStubEvaluator {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(predicates: I) -> Self {
        Self {
            trivial_predicates: predicates.into_iter().map(Into::into).collect(),
        }
    }

    /// Taxonomic and opposite-of relations only.
    pub fn taxonomic() -> Self {
        Self::new(["opposite of", "instance of", "subclass of", "part of"])
    }
}

impl Evaluator for RuleStubEvaluator {
    fn judge(&self, request: &EvalRequest<'_>) -> Result<String, LlmError> {
        let trivial = request
            .triples
            .iter()
            .filter(|t| crate::filter::apply_rules(t).passed())
            .all(|t| self.trivial_predicates.contains(&t.predicate));
        Ok(if trivial {
            "YES  (all non-informative)"
        } else {
            "NO   (at least one informative)"
        }
        .into())
    }
}

/// Always returns the same response.
#[derive(Debug, Clone)]
pub struct ConstantEvaluator(pub String);

impl Evaluator for ConstantEvaluator {
    fn judge(&self, _request: &EvalRequest<'_>) -> Result<String, LlmError> {
        Ok(self.0.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluatorVerdict {
    pub all_non_informative: bool,
    pub raw_response: String,
}

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("cannot parse evaluator response {0:?}")]
    Parse(String),
    #[error("evaluator unavailable: {0}")]
    Unavailable(#[from] LlmError),
    #[error("entity has no outgoing triples")]
    NoTriples,
}

/// Reads the first token of `raw` as YES or NO, ignoring case and trailing
/// punctuation.
pub fn parse_verdict(raw: &str) -> Result<bool, EvalError> {
    let token = raw
        .split_whitespace()
        .next()
        .map(|t| t.trim_end_matches(|c: char| c.is_ascii_punctuation()))
        .unwrap_or("");
    match token.to_ascii_uppercase().as_str() {
        "YES" => Ok(true),
        "NO" => Ok(false),
        _ => Err(EvalError::Parse(raw.to_string())),
    }
}

pub fn evaluate_entity(
    evaluator: &dyn Evaluator,
    entity: &str,
    external_id: Option<&str>,
    outgoing: &[Triple],
) -> Result<EvaluatorVerdict, EvalError> {
    if outgoing.is_empty() {
        return Err(EvalError::NoTriples);
    }
    let prompt = render_non_informative_prompt(entity, external_id, outgoing);
    let raw = evaluator.judge(&EvalRequest {
        entity,
        external_id,
        triples: outgoing,
        prompt: &prompt,
    })?;
    Ok(EvaluatorVerdict {
        all_non_informative: parse_verdict(&raw)?,
        raw_response: raw,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurateConfig {
    pub n_traversals: usize,
    pub sample_per_traversal: usize,
    pub m: usize,
    pub k: usize,
    pub seed_category: String,
    pub rng_seed: u64,
    pub max_triples: usize,
    /// Bound on concurrent evaluator requests; 0 uses the rayon default.
    pub jobs: usize,
}

impl Default for CurateConfig {
    fn default() -> Self {
        Self {
            n_traversals: 100,
            sample_per_traversal: 5,
            m: 4,
            k: 3,
            seed_category: crate::kb::HUMAN_CATEGORY.to_string(),
            rng_seed: 0,
            max_triples: DEFAULT_MAX_TRIPLES,
            jobs: 0,
        }
    }
}

/// Runs `n_traversals` extractions from random seeds and samples up to
/// `sample_per_traversal` of the discovered entities from each.
///
/// Traversals ignore the blacklist, and blacklisted entities are dropped only
/// after sampling, so the candidate pool does not shift as the blacklist
/// grows. Only entities with outgoing triples are considered.
pub fn collect_candidates(
    kb: &KnowledgeBase,
    blacklist: &Blacklist,
    cfg: &CurateConfig,
) -> Result<CandidateSet, KbError> {
    let open = Blacklist::new();
    let extractor = Extractor::new(kb, &open);
    let ecfg = ExtractionConfig {
        m: cfg.m.max(1),
        k: cfg.k.max(1),
        seed_category: cfg.seed_category.clone(),
        rng_seed: cfg.rng_seed,
    };
    let mut c = CandidateSet::default();
    for traversal in 0..cfg.n_traversals {
        let mut r = rng::derived(cfg.rng_seed, &[traversal as u64]);
        let seed = kb.sample_seed(&cfg.seed_category, &mut r)?;
        let sg = extractor
            .extract(seed, &ecfg, &mut RandomSampler(&mut r))
            .expect("seed comes from the knowledge base and config is valid");
        let discovered: Vec<(&str, usize)> = sg
            .discovered()
            .into_iter()
            .filter(|(e, _)| !kb.outgoing(e).is_empty())
            .collect();
        let mut picks = if discovered.len() <= cfg.sample_per_traversal {
            (0..discovered.len()).collect::<Vec<_>>()
        } else {
            rand::seq::index::sample(&mut r, discovered.len(), cfg.sample_per_traversal).into_vec()
        };
        picks.sort_unstable();
        for i in picks {
            let (e, hop) = discovered[i];
            if blacklist.contains(e, kb.external_id(e)) {
                continue;
            }
            c.push(e, seed, Provenance { traversal, hop });
        }
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub entity: String,
    /// `YES`, `NO`, `PARSE_ERROR`, `NO_TRIPLES` or `UNAVAILABLE`.
    pub verdict: String,
    pub raw: String,
    pub truncated: bool,
}

#[derive(Debug, Clone)]
pub struct CurateOutcome {
    pub blacklist: Blacklist,
    pub candidates: CandidateSet,
    pub added: Vec<String>,
    pub audit: Vec<AuditRecord>,
}

#[derive(Debug, thiserror::Error)]
pub enum CurateError {
    #[error(transparent)]
    Kb(#[from] KbError),
    #[error("evaluator unavailable after {} of {} candidates: {source}", .partial.audit.len(), .partial.candidates.len())]
    EvaluatorUnavailable {
        /// Progress up to the failure; its blacklist is safe to checkpoint.
        partial: Box<CurateOutcome>,
        source: LlmError,
    },
}

/// Collects candidates, evaluates each, and returns `seed ∪ additions`.
pub fn curate(
    kb: &KnowledgeBase,
    seed_blacklist: &Blacklist,
    cfg: &CurateConfig,
    evaluator: &dyn Evaluator,
) -> Result<CurateOutcome, CurateError> {
    let candidates = collect_candidates(kb, seed_blacklist, cfg)?;
    let evaluate = |e: &String| {
        let mut outgoing: Vec<Triple> = kb.outgoing(e).into_iter().cloned().collect();
        let truncated = outgoing.len() > cfg.max_triples;
        outgoing.truncate(cfg.max_triples);
        (evaluate_entity(evaluator, e, kb.external_id(e), &outgoing), truncated)
    };
    let run = || candidates.entities().par_iter().map(evaluate).collect::<Vec<_>>();
    let results = crate::par::install(cfg.jobs, run);

    let mut out = CurateOutcome {
        blacklist: seed_blacklist.clone(),
        candidates: CandidateSet::default(),
        added: Vec::new(),
        audit: Vec::with_capacity(results.len()),
    };
    let mut failure = None;
    for (entity, (result, truncated)) in candidates.entities().iter().zip(results) {
        let (verdict, raw) = match result {
            Ok(v) => {
                if v.all_non_informative {
                    out.blacklist.insert(entity, kb.external_id(entity));
                    out.added.push(entity.clone());
                }
                (if v.all_non_informative { "YES" } else { "NO" }, v.raw_response)
            }
            Err(EvalError::Parse(raw)) => {
                log::warn!("skipping {entity}: unparsable evaluator response");
                ("PARSE_ERROR", raw)
            }
            Err(EvalError::NoTriples) => ("NO_TRIPLES", String::new()),
            Err(EvalError::Unavailable(e)) => {
                let msg = e.to_string();
                failure.get_or_insert(e);
                ("UNAVAILABLE", msg)
            }
        };
        out.audit.push(AuditRecord {
            entity: entity.clone(),
            verdict: verdict.into(),
            raw,
            truncated,
        });
    }
    out.candidates = candidates;
    match failure {
        Some(source) => Err(CurateError::EvaluatorUnavailable {
            partial: Box::new(out),
            source,
        }),
        None => Ok(out),
    }
}
