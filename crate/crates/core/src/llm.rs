//! Chat-completion clients shared by blacklist curation and text generation.
//!
//! The HTTP client speaks the OpenAI-compatible `chat/completions` contract:
//! `{"model", "messages": [{"role": "user", "content": prompt}], "temperature"}`
//! and reads `choices[0].message.content` from the response.

use std::env;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::json;

pub const ENV_URL: &str = "KGF_LLM_URL";
pub const ENV_MODEL: &str = "KGF_LLM_MODEL";
pub const ENV_KEY: &str = "KGF_LLM_KEY";

#[derive(Debug, thiserror::Error)]
pub enum LlmError {
    #[error("transport error: {0}")]
    Transport(String),
    #[error("endpoint returned HTTP {status}: {body}")]
    Status { status: u16, body: String },
    #[error("malformed response: {0}")]
    Response(String),
    #[error("missing configuration: {0}")]
    Config(String),
}

impl LlmError {
    /// Transport failures and 429/5xx are worth retrying.
    pub fn is_retryable(&self) -> bool {
        match self {
            LlmError::Transport(_) => true,
            LlmError::Status { status, .. } => *status == 429 || *status >= 500,
            _ => false,
        }
    }
}

pub trait ChatClient: Send + Sync {
    fn complete(&self, prompt: &str) -> Result<String, LlmError>;

    /// Identifier recorded in sample metadata and run manifests.
    fn model_id(&self) -> String;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatConfig {
    pub url: String,
    pub model: String,
    pub api_key: Option<String>,
    pub temperature: f64,
    pub timeout_secs: u64,
    pub max_retries: usize,
    pub backoff_ms: u64,
}

impl ChatConfig {
    pub fn new(url: impl Into<String>, model: impl Into<String>) -> Self {
        Self {
            url: url.into(),
            model: model.into(),
            api_key: None,
            temperature: 0.0,
            timeout_secs: 120,
            max_retries: 3,
            backoff_ms: 500,
        }
    }

    /// Reads `KGF_LLM_URL`, `KGF_LLM_MODEL` and `KGF_LLM_KEY`.
    pub fn from_env() -> Result<Self, LlmError> {
        let url = env::var(ENV_URL).map_err(|_| LlmError::Config(ENV_URL.into()))?;
        let model = env::var(ENV_MODEL).map_err(|_| LlmError::Config(ENV_MODEL.into()))?;
        let mut cfg = Self::new(url, model);
        cfg.api_key = env::var(ENV_KEY).ok().filter(|k| !k.is_empty());
        Ok(cfg)
    }
}

pub struct HttpChatClient {
    cfg: ChatConfig,
    http: reqwest::blocking::Client,
}

impl HttpChatClient {
    pub fn new(cfg: ChatConfig) -> Result<Self, LlmError> {
        let http = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(cfg.timeout_secs))
            .build()
            .map_err(|e| LlmError::Transport(e.to_string()))?;
        Ok(Self { cfg, http })
    }

    fn request_once(&self, prompt: &str) -> Result<String, LlmError> {
        let body = json!({
            "model": self.cfg.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.cfg.temperature,
        });
        let mut req = self.http.post(&self.cfg.url).json(&body);
        if let Some(key) = &self.cfg.api_key {
            req = req.bearer_auth(key);
        }
        let resp = req.send().map_err(|e| LlmError::Transport(e.to_string()))?;
        let status = resp.status();
        let text = resp.text().map_err(|e| LlmError::Transport(e.to_string()))?;
        if !status.is_success() {
            return Err(LlmError::Status {
                status: status.as_u16(),
                body: text.chars().take(500).collect(),
            });
        }
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| LlmError::Response(e.to_string()))?;
        v.pointer("/choices/0/message/content")
            .and_then(|c| c.as_str())
            .map(str::to_string)
            .ok_or_else(|| LlmError::Response("no choices[0].message.content".into()))
    }
}

impl ChatClient for HttpChatClient {
    fn complete(&self, prompt: &str) -> Result<String, LlmError> {
        let mut attempt = 0;
        loop {
            match self.request_once(prompt) {
                Err(e) if e.is_retryable() && attempt < self.cfg.max_retries => {
                    let wait = self.cfg.backoff_ms.saturating_mul(1 << attempt.min(10));
                    log::warn!("LLM request failed ({e}); retrying in {wait} ms");
                    thread::sleep(Duration::from_millis(wait));
                    attempt += 1;
                }
                r => return r,
            }
        }
    }

    fn model_id(&self) -> String {
        self.cfg.model.clone()
    }
}

/// Offline client that answers every prompt with the same text.
#[derive(Debug, Clone)]
pub struct MockClient {
    pub reply: String,
}

impl MockClient {
    pub fn new(reply: impl Into<String>) -> Self {
        Self { reply: reply.into() }
    }
}

impl ChatClient for MockClient {
    fn complete(&self, _prompt: &str) -> Result<String, LlmError> {
        Ok(self.reply.clone())
    }

    fn model_id(&self) -> String {
        "mock".into()
    }
}
