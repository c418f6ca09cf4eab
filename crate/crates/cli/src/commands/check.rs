use std::path::PathBuf;

use anyhow::Result;
use kgforge::extract::{verify_subgraph, Subgraph};
use kgforge::filter::RuleSet;
use serde::Serialize;

use super::{load_blacklist, load_kb, sibling, write_json, Ctx, Exit};

#[derive(clap::Args)]
pub struct Args {
    #[arg(long)]
    kb: PathBuf,
    /// Blacklist the subgraphs were extracted with (default: shipped list).
    #[arg(long)]
    blacklist: Option<PathBuf>,
    /// Subgraph JSONL produced by `extract`.
    #[arg(long)]
    input: PathBuf,
    /// Violation report (default: `<input>.check.json`).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Serialize)]
struct Entry<'a> {
    index: usize,
    seed: &'a str,
    violations: Vec<kgforge::extract::Violation>,
}

pub fn run(ctx: &Ctx, a: Args) -> Result<()> {
    let mut m = ctx.start("check");
    let kb = load_kb(&a.kb)?;
    let bl = load_blacklist(a.blacklist.as_deref())?;
    let subgraphs: Vec<Subgraph> = kgforge::jsonl::read(&a.input)?;
    let rules = RuleSet::shipped();
    let entries: Vec<Entry> = subgraphs
        .iter()
        .enumerate()
        .map(|(index, sg)| Entry {
            index,
            seed: &sg.seed,
            violations: verify_subgraph(&kb, &bl, rules, sg),
        })
        .filter(|e| !e.violations.is_empty())
        .collect();
    let total: usize = entries.iter().map(|e| e.violations.len()).sum();
    let report = a.report.unwrap_or_else(|| sibling(&a.input, ".check.json"));
    write_json(&report, &entries)?;
    println!("checked {} subgraphs: {total} violations", subgraphs.len());

    m.inputs.extend([a.kb, a.input.clone()]);
    m.inputs.extend(a.blacklist);
    m.outputs.push(report.clone());
    m.details = serde_json::json!({ "subgraphs": subgraphs.len(), "violations": total });
    if total > 0 {
        m.status = "violations".into();
        ctx.finish(m, &report, false)?;
        return Err(Exit::Partial {
            what: format!("{total} violations in {} subgraphs", entries.len()),
            report,
        }
        .into());
    }
    ctx.finish(m, &report, false)
}
