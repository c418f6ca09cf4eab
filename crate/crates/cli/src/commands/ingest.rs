use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use clap::ValueEnum;
use kgforge::kb;

use super::{create, Ctx};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Tsv,
    WikidataJson,
}

#[derive(clap::Args)]
pub struct Args {
    /// Triple TSV (`subject<TAB>predicate<TAB>object`) or Wikidata JSON dump.
    #[arg(long)]
    input: PathBuf,
    /// Input format; guessed from the extension when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Optional `entity<TAB>category` file for TSV input.
    #[arg(long)]
    categories: Option<PathBuf>,
    /// Label language for Wikidata input.
    #[arg(long)]
    language: Option<String>,
    /// Snapshot to write.
    #[arg(long)]
    output: PathBuf,
}

pub fn run(ctx: &Ctx, a: Args) -> Result<()> {
    let mut m = ctx.start("ingest");
    let format = a.format.unwrap_or_else(|| {
        let name = a.input.to_string_lossy().to_lowercase();
        if name.ends_with(".json") || name.ends_with(".jsonl") || name.ends_with(".ndjson") {
            Format::WikidataJson
        } else {
            Format::Tsv
        }
    });
    let (kb, report) = match format {
        Format::Tsv => kb::ingest_tsv(&a.input, a.categories.as_deref())?,
        Format::WikidataJson => {
            let lang: String = ctx.settings.get("language", a.language, "en".to_string())?;
            kb::ingest_wikidata_json(&a.input, &lang)?
        }
    };
    log::info!(
        "loaded {} triples ({} duplicates, {} malformed lines), {} entities",
        report.loaded,
        report.duplicates,
        report.malformed,
        kb.entities().count()
    );
    let mut w = create(&a.output)?;
    kb::write_snapshot(&kb, &mut w)?;
    w.flush()?;

    m.inputs.push(a.input.clone());
    m.inputs.extend(a.categories);
    m.outputs.push(a.output.clone());
    m.details = serde_json::json!({
        "format": format!("{format:?}"),
        "report": report,
        "categories": kb.categories().map(|(c, n)| (c.to_string(), n)).collect::<std::collections::BTreeMap<_, _>>(),
    });
    ctx.finish(m, &a.output, false)
}
