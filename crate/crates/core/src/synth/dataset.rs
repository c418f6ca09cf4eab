use std::fs::{self, File};
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::jsonl;
use crate::{rng, Triple};

pub const TRAIN_FILE: &str = "train.jsonl";
pub const TEST_FILE: &str = "test.jsonl";

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SampleMeta {
    pub seed: String,
    pub m: usize,
    pub k: usize,
    pub generator: String,
    pub prompt_version: String,
}

/// One `{"text", "triples", "meta"}` record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSample {
    pub text: String,
    pub triples: Vec<Triple>,
    #[serde(default)]
    pub meta: SampleMeta,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub train: Vec<DatasetSample>,
    pub test: Vec<DatasetSample>,
    pub split_seed: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("train fraction must lie strictly between 0 and 1, got {0}")]
    BadFraction(f64),
    #[error(transparent)]
    Jsonl(#[from] jsonl::JsonlError),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}:{line}: {reason}")]
    Record { path: String, line: usize, reason: String },
}

/// Shuffles deterministically from `split_seed` and puts
/// `floor(n * (1 - train_fraction))` samples in the test split.
pub fn assemble(samples: Vec<DatasetSample>, train_fraction: f64, split_seed: u64) -> Result<Dataset, DatasetError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(DatasetError::BadFraction(train_fraction));
    }
    let mut samples = samples;
    samples.shuffle(&mut rng::seeded(split_seed));
    let n = samples.len();
    // the epsilon absorbs representation error such as 10 * 0.1 = 0.99999...
    let n_test = ((n as f64) * (1.0 - train_fraction) + 1e-9).floor() as usize;
    let test = samples.split_off(n - n_test.min(n));
    Ok(Dataset {
        train: samples,
        test,
        split_seed,
    })
}

pub fn write_dataset(dir: &Path, ds: &Dataset) -> Result<(), DatasetError> {
    fs::create_dir_all(dir).map_err(|source| DatasetError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    jsonl::write(&dir.join(TRAIN_FILE), &ds.train)?;
    jsonl::write(&dir.join(TEST_FILE), &ds.test)?;
    Ok(())
}

pub fn read_split(dir: &Path, split_seed: u64) -> Result<Dataset, DatasetError> {
    Ok(Dataset {
        train: read_samples(&dir.join(TRAIN_FILE))?,
        test: read_samples(&dir.join(TEST_FILE))?,
        split_seed,
    })
}

const TEXT_KEYS: [&str; 5] = ["text", "input", "input_text", "sentence", "context"];
const TRIPLE_KEYS: [&str; 6] = ["triples", "kg", "graph", "output", "knowledge_graph", "target"];

fn triple_from_value(v: &Value) -> Result<Triple, String> {
    let field = |x: Option<&Value>| x.and_then(Value::as_str).map(str::to_string);
    let (s, p, o) = match v {
        Value::Array(a) if a.len() == 3 => (field(a.first()), field(a.get(1)), field(a.get(2))),
        Value::Object(m) => (
            field(m.get("subject").or(m.get("head"))),
            field(m.get("predicate").or(m.get("relation")).or(m.get("rel"))),
            field(m.get("object").or(m.get("tail"))),
        ),
        _ => (None, None, None),
    };
    match (s, p, o) {
        (Some(s), Some(p), Some(o)) => Triple::new(s, p, o).map_err(|e| e.to_string()),
        _ => Err(format!("not a triple: {v}")),
    }
}

/// Reads a record in this crate's schema or in a foreign schema whose
/// field names differ (`input`/`output`, triples as a JSON string, triples
/// as `{subject, relation, object}` objects).
pub fn sample_from_value(v: &Value) -> Result<DatasetSample, String> {
    if let Ok(s) = serde_json::from_value::<DatasetSample>(v.clone()) {
        return Ok(s);
    }
    let obj = v.as_object().ok_or("record is not a JSON object")?;
    let text = TEXT_KEYS
        .iter()
        .find_map(|k| obj.get(*k).and_then(Value::as_str))
        .unwrap_or("")
        .to_string();
    let raw = TRIPLE_KEYS
        .iter()
        .find_map(|k| obj.get(*k))
        .ok_or("record has no triples field")?;
    let parsed;
    let list = match raw {
        Value::String(s) => {
            parsed = serde_json::from_str::<Value>(s).map_err(|e| format!("triples string: {e}"))?;
            &parsed
        }
        other => other,
    };
    let triples = list
        .as_array()
        .ok_or("triples field is not a list")?
        .iter()
        .map(triple_from_value)
        .collect::<Result<Vec<_>, _>>()?;
    let meta = obj
        .get("meta")
        .and_then(|m| serde_json::from_value(m.clone()).ok())
        .unwrap_or_default();
    Ok(DatasetSample { text, triples, meta })
}

pub fn read_samples(path: &Path) -> Result<Vec<DatasetSample>, DatasetError> {
    let io_err = |source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    };
    let reader = BufReader::new(File::open(path).map_err(io_err)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(io_err)?;
        if line.trim().is_empty() {
            continue;
        }
        let record = |reason: String| DatasetError::Record {
            path: path.display().to_string(),
            line: i + 1,
            reason,
        };
        let v: Value = serde_json::from_str(&line).map_err(|e| record(e.to_string()))?;
        out.push(sample_from_value(&v).map_err(record)?);
    }
    Ok(out)
}
