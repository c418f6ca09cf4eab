use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{DatasetSample, SampleMeta};
use crate::extract::Subgraph;
use crate::llm::{ChatClient, LlmError};
use crate::prompts::{render_kg2text_prompt, triples_from_kg2text_prompt, PROMPT_VERSION};

/// A run whose drop rate exceeds this is reported as failed.
pub const MAX_DROP_RATE: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationConfig {
    /// Extra attempts after the first for an empty or failed reply.
    pub retries: usize,
    /// 0 uses rayon's global pool.
    pub jobs: usize,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        Self { retries: 2, jobs: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DropRecord {
    pub index: usize,
    pub seed: String,
    pub attempts: usize,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct GenerationOutcome {
    /// Successful samples, in input order.
    pub samples: Vec<DatasetSample>,
    pub drops: Vec<DropRecord>,
    pub requested: usize,
    /// True when nothing succeeded and every failure came from transport or
    /// server errors.
    pub backend_unavailable: bool,
}

impl GenerationOutcome {
    pub fn drop_rate(&self) -> f64 {
        if self.requested == 0 {
            0.0
        } else {
            self.drops.len() as f64 / self.requested as f64
        }
    }

    pub fn failed(&self) -> bool {
        self.drop_rate() > MAX_DROP_RATE
    }
}

enum Failure {
    Empty,
    Client(LlmError),
}

fn clean_reply(reply: &str) -> &str {
    let t = reply.trim();
    t.strip_prefix("Text:").map(str::trim).unwrap_or(t)
}

fn generate_one(client: &dyn ChatClient, sg: &Subgraph, retries: usize) -> (Result<String, Failure>, usize) {
    let prompt = render_kg2text_prompt(&sg.triples);
    let mut last = Failure::Empty;
    for attempt in 1..=retries + 1 {
        match client.complete(&prompt) {
            Ok(reply) => {
                let text = clean_reply(&reply);
                if !text.is_empty() {
                    return (Ok(text.to_string()), attempt);
                }
                last = Failure::Empty;
            }
            Err(e) => {
                let retry = e.is_retryable();
                last = Failure::Client(e);
                if !retry {
                    return (Err(last), attempt);
                }
            }
        }
    }
    (Err(last), retries + 1)
}

/// Requests one text per non-empty subgraph. Output order follows input
/// order regardless of `jobs`.
pub fn generate_texts(client: &dyn ChatClient, subgraphs: &[Subgraph], cfg: &GenerationConfig) -> GenerationOutcome {
    let work = || -> Vec<(Result<String, Failure>, usize)> {
        subgraphs
            .par_iter()
            .map(|sg| {
                if sg.triples.is_empty() {
                    (Err(Failure::Empty), 0)
                } else {
                    generate_one(client, sg, cfg.retries)
                }
            })
            .collect()
    };
    let results = crate::par::install(cfg.jobs, work);

    let generator = client.model_id();
    let mut samples = Vec::new();
    let mut drops = Vec::new();
    let mut unavailable = 0;
    for (index, (sg, (res, attempts))) in subgraphs.iter().zip(results).enumerate() {
        match res {
            Ok(text) => samples.push(DatasetSample {
                text,
                triples: sg.triples.clone(),
                meta: SampleMeta {
                    seed: sg.seed.clone(),
                    m: sg.m,
                    k: sg.k,
                    generator: generator.clone(),
                    prompt_version: PROMPT_VERSION.into(),
                },
            }),
            Err(f) => {
                let reason = match &f {
                    Failure::Empty if attempts == 0 => "empty subgraph".to_string(),
                    Failure::Empty => "empty reply".to_string(),
                    Failure::Client(e) => {
                        if e.is_retryable() {
                            unavailable += 1;
                        }
                        e.to_string()
                    }
                };
                log::warn!("dropping sample {index} (seed {}): {reason}", sg.seed);
                drops.push(DropRecord {
                    index,
                    seed: sg.seed.clone(),
                    attempts,
                    reason,
                });
            }
        }
    }
    GenerationOutcome {
        backend_unavailable: samples.is_empty() && unavailable > 0 && unavailable == drops.len(),
        samples,
        drops,
        requested: subgraphs.len(),
    }
}

/// Offline generator that verbalizes each triple of a text-generation
/// prompt as a plain sentence.
#[derive(Debug, Clone, Copy, Default)]
pub struct TemplateClient;

impl ChatClient for TemplateClient {
    fn complete(&self, prompt: &str) -> Result<String, LlmError> {
        let triples = triples_from_kg2text_prompt(prompt)
            .ok_or_else(|| LlmError::Response("prompt carries no triple list".into()))?;
        let sentences: Vec<String> = triples
            .iter()
            .map(|t| format!("{} {} {}.", t.subject, t.predicate, t.object))
            .collect();
        Ok(sentences.join(" "))
    }

    fn model_id(&self) -> String {
        "template".into()
    }
}
