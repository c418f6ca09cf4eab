use std::collections::HashMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use kgforge::stats::{bootstrap_ci, mean, wilcoxon_signed_rank, BOOTSTRAP_ITERS, CI_LEVEL};
use serde::Serialize;

use super::{create, usage, Ctx};

#[derive(clap::Args)]
pub struct Args {
    /// Per-sample CSV from `evaluate` for the system under test.
    #[arg(long)]
    ours: PathBuf,
    /// Baseline as `name=path.csv`; repeatable.
    #[arg(long = "baseline", required = true)]
    baselines: Vec<String>,
    /// Column to compare, e.g. g-bleu.
    #[arg(long)]
    metric: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Bootstrap resamples.
    #[arg(long)]
    iters: Option<usize>,
    /// Result table CSV.
    #[arg(long)]
    output: PathBuf,
}

fn read_scores(path: &Path, metric: &str) -> Result<Vec<(String, f64)>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let headers = r.headers()?.clone();
    let col = headers
        .iter()
        .position(|h| h == metric)
        .ok_or_else(|| usage(format!("{} has no column {metric:?}", path.display())))?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let v: f64 = rec[col]
            .parse()
            .with_context(|| format!("{}: bad score {:?}", path.display(), &rec[col]))?;
        out.push((rec[0].to_string(), v));
    }
    Ok(out)
}

#[derive(Serialize)]
struct Row {
    system: String,
    n: usize,
    score: f64,
    ci_lo: f64,
    ci_hi: f64,
    p_value: Option<f64>,
}

pub fn run(ctx: &Ctx, a: Args) -> Result<()> {
    let mut m = ctx.start("compare");
    let seed = ctx.settings.get("seed", a.seed, 0)?;
    let iters = ctx.settings.get("bootstrap_iters", a.iters, BOOTSTRAP_ITERS)?;
    let ours = read_scores(&a.ours, &a.metric)?;
    let ours_map: HashMap<&str, f64> = ours.iter().map(|(id, v)| (id.as_str(), *v)).collect();

    let ci = |xs: &[f64], stream: u64| {
        let seed = kgforge::rng::derive_seed(seed, &[stream]);
        bootstrap_ci(xs, iters, CI_LEVEL, seed).unwrap_or((f64::NAN, f64::NAN))
    };
    let our_scores: Vec<f64> = ours.iter().map(|x| x.1).collect();
    let (lo, hi) = ci(&our_scores, 0);
    let mut rows = vec![Row {
        system: "ours".into(),
        n: our_scores.len(),
        score: mean(&our_scores),
        ci_lo: lo,
        ci_hi: hi,
        p_value: None,
    }];
    m.inputs.push(a.ours.clone());

    for (i, spec) in a.baselines.iter().enumerate() {
        let (name, path) = spec
            .split_once('=')
            .ok_or_else(|| usage(format!("baseline {spec:?} is not name=path")))?;
        let path = PathBuf::from(path);
        let theirs = read_scores(&path, &a.metric)?;
        let (mut xa, mut xb) = (Vec::new(), Vec::new());
        for (id, v) in &theirs {
            if let Some(o) = ours_map.get(id.as_str()) {
                xa.push(*o);
                xb.push(*v);
            }
        }
        if xa.is_empty() {
            return Err(usage(format!("{name} shares no sample ids with {}", a.ours.display())));
        }
        if xa.len() < theirs.len().max(ours.len()) {
            log::warn!("{name}: comparing {} shared ids only", xa.len());
        }
        let test = wilcoxon_signed_rank(&xa, &xb)?;
        let baseline: Vec<f64> = theirs.iter().map(|x| x.1).collect();
        let (lo, hi) = ci(&baseline, i as u64 + 1);
        rows.push(Row {
            system: name.to_string(),
            n: baseline.len(),
            score: mean(&baseline),
            ci_lo: lo,
            ci_hi: hi,
            p_value: Some(test.p_value),
        });
        m.inputs.push(path);
    }

    let mut w = csv::Writer::from_writer(create(&a.output)?);
    w.write_record(["system", "n", "score", "ci_lo", "ci_hi", "p_value"])?;
    for r in &rows {
        w.write_record([
            r.system.clone(),
            r.n.to_string(),
            format!("{:.4}", r.score),
            format!("{:.4}", r.ci_lo),
            format!("{:.4}", r.ci_hi),
            r.p_value.map(|p| format!("{p:.6}")).unwrap_or_default(),
        ])?;
        println!(
            "{}\t{:.2}\t[{:.2}, {:.2}]\t{}",
            r.system,
            r.score,
            r.ci_lo,
            r.ci_hi,
            r.p_value.map(|p| format!("p={p:.4}")).unwrap_or_default()
        );
    }
    w.flush()?;

    m.seeds.insert("bootstrap_seed".into(), seed);
    m.outputs.push(a.output.clone());
    m.details = serde_json::json!({ "metric": a.metric, "iters": iters, "rows": rows });
    ctx.finish(m, &a.output, false)
}
