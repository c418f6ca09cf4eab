use std::path::PathBuf;

use anyhow::Result;
use kgforge::synth::{assemble, read_samples, write_dataset, TEST_FILE, TRAIN_FILE};

use super::{usage, Ctx};

#[derive(clap::Args)]
pub struct Args {
    /// Sample JSONL files produced by `generate-text`, concatenated in order.
    #[arg(long, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    #[arg(long)]
    train_fraction: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory receiving train.jsonl and test.jsonl.
    #[arg(long)]
    output_dir: PathBuf,
}

pub fn run(ctx: &Ctx, a: Args) -> Result<()> {
    let mut m = ctx.start("assemble");
    let fraction = ctx.settings.get("train_fraction", a.train_fraction, 0.9)?;
    let seed = ctx.settings.get("seed", a.seed, 0)?;
    let mut samples = Vec::new();
    for p in &a.input {
        samples.extend(read_samples(p)?);
    }
    let ds = assemble(samples, fraction, seed).map_err(|e| usage(e.to_string()))?;
    write_dataset(&a.output_dir, &ds)?;
    log::info!("train {} / test {}", ds.train.len(), ds.test.len());

    m.seeds.insert("split_seed".into(), seed);
    m.inputs = a.input;
    m.outputs = vec![a.output_dir.join(TRAIN_FILE), a.output_dir.join(TEST_FILE)];
    m.details = serde_json::json!({ "train": ds.train.len(), "test": ds.test.len() });
    ctx.finish(m, &a.output_dir, true)
}
