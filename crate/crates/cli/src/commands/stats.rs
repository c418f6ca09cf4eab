use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Result;
use clap::ValueEnum;
use kgforge::stats::{count_histogram, describe, whitespace_tokens, DistributionSummary, Side};
use kgforge::synth::{read_samples, DatasetSample, TEST_FILE, TRAIN_FILE};

use super::{create, Ctx};

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum SideArg {
    Triples,
    Tokens,
    Both,
}

#[derive(clap::Args)]
pub struct Args {
    /// A sample JSONL file, or a directory with train.jsonl / test.jsonl.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    side: SideArg,
    /// Summary CSV (default: stdout only).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Long-format `split,side,value,frequency` histogram CSV.
    #[arg(long)]
    histogram: Option<PathBuf>,
}

fn splits(input: &Path) -> Result<Vec<(String, Vec<DatasetSample>)>> {
    if input.is_dir() {
        let mut out = Vec::new();
        for (name, file) in [("train", TRAIN_FILE), ("test", TEST_FILE)] {
            let p = input.join(file);
            if p.exists() {
                out.push((name.to_string(), read_samples(&p)?));
            }
        }
        if out.is_empty() {
            return Err(super::usage(format!(
                "{} has no {TRAIN_FILE} or {TEST_FILE}",
                input.display()
            )));
        }
        Ok(out)
    } else {
        Ok(vec![("all".to_string(), read_samples(input)?)])
    }
}

pub const HEADER: [&str; 7] = ["split", "side", "n", "min", "avg", "median", "max"];

fn row(split: &str, side: Side, s: &DistributionSummary) -> Vec<String> {
    let side = match side {
        Side::Triples => "triples",
        Side::Tokens => "tokens",
    };
    vec![
        split.to_string(),
        side.to_string(),
        s.n.to_string(),
        format!("{}", s.min),
        format!("{:.2}", s.avg),
        format!("{:.2}", s.median),
        format!("{}", s.max),
    ]
}

pub fn run(ctx: &Ctx, a: Args) -> Result<()> {
    let mut m = ctx.start("stats");
    let sides: Vec<Side> = match a.side {
        SideArg::Triples => vec![Side::Triples],
        SideArg::Tokens => vec![Side::Tokens],
        SideArg::Both => vec![Side::Triples, Side::Tokens],
    };
    let data = splits(&a.input)?;
    let mut rows = Vec::new();
    let mut hist = Vec::new();
    for (split, samples) in &data {
        for &side in &sides {
            let Some(s) = describe(samples, side) else { continue };
            rows.push(row(split, side, &s));
            let counts = samples.iter().map(|x| match side {
                Side::Triples => x.triples.len(),
                Side::Tokens => whitespace_tokens(&x.text),
            });
            for (value, freq) in count_histogram(counts) {
                hist.push([
                    split.clone(),
                    row(split, side, &s)[1].clone(),
                    value.to_string(),
                    freq.to_string(),
                ]);
            }
        }
    }

    let mut stdout = csv::Writer::from_writer(std::io::stdout());
    stdout.write_record(HEADER)?;
    for r in &rows {
        stdout.write_record(r)?;
    }
    stdout.flush()?;
    if let Some(path) = &a.output {
        let mut w = csv::Writer::from_writer(create(path)?);
        w.write_record(HEADER)?;
        for r in &rows {
            w.write_record(r)?;
        }
        w.flush()?;
        m.outputs.push(path.clone());
    }
    if let Some(path) = &a.histogram {
        let mut w = csv::Writer::from_writer(create(path)?);
        w.write_record(["split", "side", "value", "frequency"])?;
        for r in &hist {
            w.write_record(r)?;
        }
        w.flush()?;
        m.outputs.push(path.clone());
    }
    std::io::stdout().flush()?;

    m.inputs.push(a.input.clone());
    m.details = serde_json::json!({ "rows": rows });
    let anchor = a.output.clone().unwrap_or_else(|| {
        if a.input.is_dir() {
            a.input.join("stats")
        } else {
            a.input.clone()
        }
    });
    ctx.finish(m, &anchor, false)
}
