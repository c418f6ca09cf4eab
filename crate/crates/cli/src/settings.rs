//! `key = value` configuration with environment and flag overrides.
//!
//! Lookup order for a key: command-line flag, then `KGF_<KEY>` from the
//! environment, then the config file, then the built-in default.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};

pub const KNOWN_KEYS: &[&str] = &[
    "seed",
    "jobs",
    "seed_category",
    "retry_budget",
    "train_fraction",
    "retries",
    "max_triples",
    "language",
    "llm_url",
    "llm_model",
    "llm_key",
    "temperature",
    "emb_url",
    "emb_model",
    "emb_key",
    "bootstrap_iters",
];

const SECRET_KEYS: &[&str] = &["llm_key", "emb_key"];

#[derive(Debug, Default, Clone)]
pub struct Settings {
    file: BTreeMap<String, String>,
    env: BTreeMap<String, String>,
    /// Values actually used, for the run manifest.
    resolved: std::cell::RefCell<BTreeMap<String, String>>,
}

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("config line {}: expected `key = value`", no + 1);
        };
        let key = k.trim().replace('-', "_").to_lowercase();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            log::warn!("config line {}: unknown key {key:?} ignored", no + 1);
            continue;
        }
        out.insert(key, v.trim().trim_matches('"').to_string());
    }
    Ok(out)
}

impl Settings {
    pub fn load(config: Option<&Path>) -> Result<Self> {
        let file = match config {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
                parse_config(&text).with_context(|| format!("in {}", p.display()))?
            }
            None => BTreeMap::new(),
        };
        let env = KNOWN_KEYS
            .iter()
            .filter_map(|k| {
                let var = format!("KGF_{}", k.to_uppercase());
                std::env::var(&var).ok().map(|v| (k.to_string(), v))
            })
            .collect();
        Ok(Self {
            file,
            env,
            resolved: Default::default(),
        })
    }

    fn raw(&self, key: &str) -> Option<&String> {
        self.env.get(key).or_else(|| self.file.get(key))
    }

    fn record(&self, key: &str, value: String) {
        let shown = if SECRET_KEYS.contains(&key) {
            "<set>".to_string()
        } else {
            value
        };
        self.resolved.borrow_mut().insert(key.to_string(), shown);
    }

    /// Resolves `key`, falling back to `default`.
    pub fn get<T>(&self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        Ok(self.get_opt(key, flag)?.unwrap_or_else(|| {
            self.record(key, default.to_string());
            default
        }))
    }

    pub fn get_opt<T>(&self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let value = match flag {
            Some(v) => Some(v),
            None => match self.raw(key) {
                Some(raw) => Some(
                    raw.parse::<T>()
                        .map_err(|e| anyhow::anyhow!("setting {key} = {raw:?}: {e}"))?,
                ),
                None => None,
            },
        };
        if let Some(v) = &value {
            self.record(key, v.to_string());
        }
        Ok(value)
    }

    pub fn resolved(&self) -> BTreeMap<String, String> {
        self.resolved.borrow().clone()
    }
}
