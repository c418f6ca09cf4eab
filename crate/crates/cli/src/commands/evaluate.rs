use std::collections::HashMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use kgforge::metrics::{bertscore_text, g_score, EmbeddingProvider, HttpEmbedder, SimFn, StubEmbedder, METRIC_VERSION};
use kgforge::synth::{sample_from_value, DatasetSample};
use serde::Serialize;
use serde_json::Value;

use super::{create, sibling, usage, write_json, Ctx, Exit};

/// Scores are reported on a 0-100 scale.
pub const SCALE: f64 = 100.0;

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    GBleu,
    GRouge,
    GBs,
    Bertscore,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::GBleu => "g-bleu",
            Metric::GRouge => "g-rouge",
            Metric::GBs => "g-bs",
            Metric::Bertscore => "bertscore",
        }
    }
}

#[derive(clap::Args)]
pub struct Args {
    /// Predictions: JSONL with `triples` (and `text` for bertscore).
    #[arg(long)]
    pred: PathBuf,
    /// References in the same format.
    #[arg(long = "ref")]
    reference: PathBuf,
    /// Metrics to compute; repeat or comma-separate.
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    metric: Vec<Metric>,
    /// `stub` (offline hashed trigrams) or `http` (emb_url / emb_model).
    #[arg(long, default_value = "stub")]
    embedder: String,
    /// Field pairing predictions with references; line order is used when
    /// any record lacks it.
    #[arg(long, default_value = "id")]
    id_field: String,
    /// Per-sample CSV.
    #[arg(long)]
    output: PathBuf,
    /// JSON summary (default: `<output>.summary.json`).
    #[arg(long)]
    summary: Option<PathBuf>,
}

struct Record {
    id: Option<String>,
    sample: DatasetSample,
}

fn read_records(path: &Path, id_field: &str) -> Result<(Vec<Record>, usize)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    let mut unparsable = 0;
    for (no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: Value =
            serde_json::from_str(line).with_context(|| format!("{}:{}: invalid JSON", path.display(), no + 1))?;
        let id = match v.get(id_field) {
            Some(Value::String(s)) => Some(s.clone()),
            Some(Value::Number(n)) => Some(n.to_string()),
            _ => None,
        };
        let sample = sample_from_value(&v).unwrap_or_else(|reason| {
            log::warn!("{}:{}: scoring as empty graph ({reason})", path.display(), no + 1);
            unparsable += 1;
            DatasetSample {
                text: v.get("text").and_then(Value::as_str).unwrap_or("").to_string(),
                triples: Vec::new(),
                meta: Default::default(),
            }
        });
        out.push(Record { id, sample });
    }
    Ok((out, unparsable))
}

type Pair<'a> = (String, Option<&'a DatasetSample>, &'a DatasetSample);

/// Reference-ordered `(id, prediction, reference)` triples.
fn pair<'a>(preds: &'a [Record], refs: &'a [Record]) -> (Vec<Pair<'a>>, bool) {
    let by_id = !refs.is_empty() && refs.iter().chain(preds).all(|r| r.id.is_some());
    if by_id {
        let index: HashMap<&str, &DatasetSample> = preds
            .iter()
            .map(|r| (r.id.as_deref().unwrap_or_default(), &r.sample))
            .collect();
        let pairs = refs
            .iter()
            .map(|r| {
                let id = r.id.clone().unwrap_or_default();
                let p = index.get(id.as_str()).copied();
                (id, p, &r.sample)
            })
            .collect();
        (pairs, true)
    } else {
        let pairs = refs
            .iter()
            .enumerate()
            .map(|(i, r)| (i.to_string(), preds.get(i).map(|p| &p.sample), &r.sample))
            .collect();
        (pairs, false)
    }
}

#[derive(Serialize)]
struct SampleScore {
    id: String,
    precision: f64,
    recall: f64,
    f1: f64,
}

#[derive(Serialize)]
struct MetricSummary {
    metric: &'static str,
    mean: f64,
    precision_mean: f64,
    recall_mean: f64,
    per_sample: Vec<SampleScore>,
}

fn score_all(
    metric: Metric,
    pairs: &[(String, Option<&DatasetSample>, &DatasetSample)],
    provider: &dyn EmbeddingProvider,
) -> Result<Vec<SampleScore>, kgforge::metrics::MetricError> {
    kgforge::par::try_map(pairs, |(id, pred, reference)| {
        let empty = DatasetSample {
            text: String::new(),
            triples: Vec::new(),
            meta: Default::default(),
        };
        let pred = pred.unwrap_or(&empty);
        let (p, r, f) = match metric {
            Metric::Bertscore => {
                let s = bertscore_text(&pred.text, &reference.text, provider)?;
                (s.precision, s.recall, s.f1)
            }
            _ => {
                let sim = match metric {
                    Metric::GBleu => SimFn::Bleu,
                    Metric::GRouge => SimFn::Rouge,
                    _ => SimFn::Bert(provider),
                };
                let s = g_score(&pred.triples, &reference.triples, sim)?;
                (s.precision, s.recall, s.f1)
            }
        };
        Ok(SampleScore {
            id: id.clone(),
            precision: p * SCALE,
            recall: r * SCALE,
            f1: f * SCALE,
        })
    })
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.collect();
    kgforge::stats::mean(&v)
}

pub fn run(ctx: &Ctx, a: Args) -> Result<()> {
    let mut m = ctx.start("evaluate");
    let (preds, bad_pred) = read_records(&a.pred, &a.id_field)?;
    let (refs, _) = read_records(&a.reference, &a.id_field)?;
    if refs.is_empty() {
        return Err(usage(format!("{} has no records", a.reference.display())));
    }
    let (pairs, by_id) = pair(&preds, &refs);
    let missing = pairs.iter().filter(|p| p.1.is_none()).count();
    if missing > 0 {
        log::warn!("{missing} references have no prediction; they score 0");
    }

    let provider: Box<dyn EmbeddingProvider> = match a.embedder.as_str() {
        "stub" => Box::new(StubEmbedder::default()),
        "http" => {
            let url: Option<String> = ctx.settings.get_opt("emb_url", None)?;
            let model: Option<String> = ctx.settings.get_opt("emb_model", None)?;
            let (Some(url), Some(model)) = (url, model) else {
                return Err(Exit::BackendUnavailable("emb_url and emb_model must be set".into()).into());
            };
            Box::new(HttpEmbedder::new(url, model, ctx.settings.get_opt("emb_key", None)?)?)
        }
        other => return Err(usage(format!("unknown embedder {other:?}"))),
    };

    let mut summaries = Vec::new();
    for &metric in &a.metric {
        let scores = kgforge::par::install(ctx.jobs, || score_all(metric, &pairs, provider.as_ref()))
            .map_err(|e| Exit::BackendUnavailable(e.to_string()))?;
        let summary = MetricSummary {
            metric: metric.name(),
            mean: mean(scores.iter().map(|s| s.f1)),
            precision_mean: mean(scores.iter().map(|s| s.precision)),
            recall_mean: mean(scores.iter().map(|s| s.recall)),
            per_sample: scores,
        };
        println!("{}\t{:.2}", summary.metric, summary.mean);
        summaries.push(summary);
    }

    let mut w = csv::Writer::from_writer(create(&a.output)?);
    let mut header = vec!["id".to_string()];
    header.extend(summaries.iter().map(|s| s.metric.to_string()));
    w.write_record(&header)?;
    for (i, (id, _, _)) in pairs.iter().enumerate() {
        let mut row = vec![id.clone()];
        row.extend(summaries.iter().map(|s| format!("{:.6}", s.per_sample[i].f1)));
        w.write_record(&row)?;
    }
    w.flush()?;
    let summary_path = a.summary.clone().unwrap_or_else(|| sibling(&a.output, ".summary.json"));
    write_json(
        &summary_path,
        &serde_json::json!({
            "metric_version": METRIC_VERSION,
            "scale": SCALE,
            "embedder": provider.name(),
            "paired_by": if by_id { a.id_field.as_str() } else { "line" },
            "n": pairs.len(),
            "missing_predictions": missing,
            "unparsable_predictions": bad_pred,
            "metrics": summaries,
        }),
    )?;

    m.inputs.extend([a.pred.clone(), a.reference.clone()]);
    m.outputs.extend([a.output.clone(), summary_path]);
    m.details = serde_json::json!({
        "metrics": summaries.iter().map(|s| (s.metric, s.mean)).collect::<std::collections::BTreeMap<_, _>>(),
        "n": pairs.len(),
    });
    ctx.finish(m, &a.output, false)
}
