use std::collections::HashMap;
use std::env;
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use serde_json::json;

use super::{harmonic, tokenize, MetricError};

pub const ENV_EMB_URL: &str = "KGF_EMB_URL";
pub const ENV_EMB_MODEL: &str = "KGF_EMB_MODEL";
pub const ENV_EMB_KEY: &str = "KGF_EMB_KEY";

/// Maps tokens to unit-normalized vectors of a fixed dimension. Identical
/// tokens must map to identical vectors.
pub trait EmbeddingProvider: Send + Sync {
    fn embed_tokens(&self, tokens: &[&str]) -> Result<Vec<Vec<f64>>, MetricError>;

    fn name(&self) -> String;
}

fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    v
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Offline provider: counts of hashed character trigrams of `<token>`,
/// unit-normalized. Cosines are nonnegative.
#[derive(Debug, Clone, Copy)]
pub struct StubEmbedder {
    pub dim: usize,
}

impl Default for StubEmbedder {
    fn default() -> Self {
        Self { dim: 256 }
    }
}

impl StubEmbedder {
    pub fn embed_one(&self, token: &str) -> Vec<f64> {
        let padded: Vec<char> = std::iter::once('<')
            .chain(token.chars())
            .chain(std::iter::once('>'))
            .collect();
        let mut v = vec![0.0; self.dim];
        let mut bump = |gram: &[char]| {
            let gram: String = gram.iter().collect();
            v[(fnv1a(gram.as_bytes()) % self.dim as u64) as usize] += 1.0;
        };
        if padded.len() < 3 {
            bump(&padded);
        }
        padded.windows(3).for_each(&mut bump);
        normalize(v)
    }
}

impl EmbeddingProvider for StubEmbedder {
    fn embed_tokens(&self, tokens: &[&str]) -> Result<Vec<Vec<f64>>, MetricError> {
        Ok(tokens.iter().map(|t| self.embed_one(t)).collect())
    }

    fn name(&self) -> String {
        format!("stub-trigram-{}", self.dim)
    }
}

/// Provider backed by a fixed token table; unknown tokens are an error.
#[derive(Debug, Clone, Default)]
pub struct TableEmbedder {
    table: HashMap<String, Vec<f64>>,
}

impl TableEmbedder {
    pub fn new<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: Into<String>,
    {
        Self {
            table: entries.into_iter().map(|(k, v)| (k.into(), normalize(v))).collect(),
        }
    }
}

impl EmbeddingProvider for TableEmbedder {
    fn embed_tokens(&self, tokens: &[&str]) -> Result<Vec<Vec<f64>>, MetricError> {
        tokens
            .iter()
            .map(|t| {
                self.table
                    .get(*t)
                    .cloned()
                    .ok_or_else(|| MetricError::Backend(format!("no embedding for token {t:?}")))
            })
            .collect()
    }

    fn name(&self) -> String {
        "table".into()
    }
}

/// Client for an OpenAI-compatible `embeddings` endpoint:
/// `{"model", "input": [...]}` in, `data[i].embedding` out. Vectors are
/// cached per token and normalized locally.
pub struct HttpEmbedder {
    url: String,
    model: String,
    api_key: Option<String>,
    max_retries: usize,
    batch: usize,
    http: reqwest::blocking::Client,
    cache: Mutex<HashMap<String, Vec<f64>>>,
}

impl HttpEmbedder {
    pub fn new(url: impl Into<String>, model: impl Into<String>, api_key: Option<String>) -> Result<Self, MetricError> {
        let http = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(60))
            .build()
            .map_err(|e| MetricError::Backend(e.to_string()))?;
        Ok(Self {
            url: url.into(),
            model: model.into(),
            api_key,
            max_retries: 3,
            batch: 256,
            http,
            cache: Mutex::new(HashMap::new()),
        })
    }

    /// Reads `KGF_EMB_URL`, `KGF_EMB_MODEL` and `KGF_EMB_KEY`.
    pub fn from_env() -> Result<Self, MetricError> {
        let url = env::var(ENV_EMB_URL).map_err(|_| MetricError::Config(ENV_EMB_URL.into()))?;
        let model = env::var(ENV_EMB_MODEL).map_err(|_| MetricError::Config(ENV_EMB_MODEL.into()))?;
        Self::new(url, model, env::var(ENV_EMB_KEY).ok().filter(|k| !k.is_empty()))
    }

    fn request(&self, inputs: &[&str]) -> Result<Vec<Vec<f64>>, MetricError> {
        let body = json!({ "model": self.model, "input": inputs });
        let mut attempt = 0;
        loop {
            let mut req = self.http.post(&self.url).json(&body);
            if let Some(key) = &self.api_key {
                req = req.bearer_auth(key);
            }
            let result = req.send().map_err(|e| (true, e.to_string())).and_then(|resp| {
                let status = resp.status();
                let text = resp.text().map_err(|e| (true, e.to_string()))?;
                if status.is_success() {
                    Ok(text)
                } else {
                    let retry = status.as_u16() == 429 || status.is_server_error();
                    Err((
                        retry,
                        format!(
                            "HTTP {}: {}",
                            status.as_u16(),
                            text.chars().take(300).collect::<String>()
                        ),
                    ))
                }
            });
            match result {
                Ok(text) => return parse_embeddings(&text, inputs.len()),
                Err((true, msg)) if attempt < self.max_retries => {
                    log::warn!("embedding request failed ({msg}); retrying");
                    thread::sleep(Duration::from_millis(500 << attempt));
                    attempt += 1;
                }
                Err((_, msg)) => return Err(MetricError::Backend(msg)),
            }
        }
    }
}

fn parse_embeddings(text: &str, expected: usize) -> Result<Vec<Vec<f64>>, MetricError> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| MetricError::Backend(e.to_string()))?;
    let data = v
        .get("data")
        .and_then(|d| d.as_array())
        .ok_or_else(|| MetricError::Backend("response has no data array".into()))?;
    if data.len() != expected {
        return Err(MetricError::Backend(format!(
            "expected {expected} embeddings, got {}",
            data.len()
        )));
    }
    data.iter()
        .map(|d| {
            d.get("embedding")
                .and_then(|e| e.as_array())
                .and_then(|e| e.iter().map(|x| x.as_f64()).collect::<Option<Vec<f64>>>())
                .map(normalize)
                .ok_or_else(|| MetricError::Backend("malformed embedding".into()))
        })
        .collect()
}

impl EmbeddingProvider for HttpEmbedder {
    fn embed_tokens(&self, tokens: &[&str]) -> Result<Vec<Vec<f64>>, MetricError> {
        let missing: Vec<&str> = {
            let cache = self.cache.lock().expect("embedding cache poisoned");
            let mut seen = std::collections::HashSet::new();
            tokens
                .iter()
                .copied()
                .filter(|t| !cache.contains_key(*t) && seen.insert(*t))
                .collect()
        };
        for chunk in missing.chunks(self.batch) {
            let vecs = self.request(chunk)?;
            let mut cache = self.cache.lock().expect("embedding cache poisoned");
            for (t, v) in chunk.iter().zip(vecs) {
                cache.insert(t.to_string(), v);
            }
        }
        let cache = self.cache.lock().expect("embedding cache poisoned");
        Ok(tokens.iter().map(|t| cache[*t].clone()).collect())
    }

    fn name(&self) -> String {
        format!("http:{}", self.model)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TokenScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Greedy matching over pre-embedded tokens. Equal tokens have similarity 1.
pub(crate) fn greedy_scores(cand: &[&str], cand_v: &[Vec<f64>], refs: &[&str], ref_v: &[Vec<f64>]) -> TokenScores {
    if cand.is_empty() || refs.is_empty() {
        let same = cand.is_empty() && refs.is_empty();
        let x = if same { 1.0 } else { 0.0 };
        return TokenScores {
            precision: x,
            recall: x,
            f1: x,
        };
    }
    let sim = |i: usize, j: usize| {
        if cand[i] == refs[j] {
            1.0
        } else {
            dot(&cand_v[i], &ref_v[j]).min(1.0)
        }
    };
    let best = |n: usize, m: usize, f: &dyn Fn(usize, usize) -> f64| -> f64 {
        (0..n)
            .map(|i| (0..m).map(|j| f(i, j)).fold(f64::NEG_INFINITY, f64::max))
            .sum::<f64>()
            / n as f64
    };
    let precision = best(cand.len(), refs.len(), &|i, j| sim(i, j));
    let recall = best(refs.len(), cand.len(), &|j, i| sim(i, j));
    TokenScores {
        precision,
        recall,
        f1: harmonic(precision, recall),
    }
}

/// Token-level BERTScore without idf weighting: recall averages, over
/// reference tokens, the best cosine against any candidate token; precision
/// does the same from the candidate side.
pub fn bertscore_text(
    candidate: &str,
    reference: &str,
    provider: &dyn EmbeddingProvider,
) -> Result<TokenScores, MetricError> {
    let c = tokenize(candidate);
    let r = tokenize(reference);
    let cv = provider.embed_tokens(&c)?;
    let rv = provider.embed_tokens(&r)?;
    Ok(greedy_scores(&c, &cv, &r, &rv))
}
