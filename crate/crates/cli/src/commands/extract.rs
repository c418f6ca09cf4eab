use std::path::PathBuf;

use anyhow::{Context, Result};
use kgforge::extract::{batch_extract, parse_recipe, BatchConfig, Extractor, RecipeEntry, CE12K_PRESET};
use kgforge::filter::RuleSet;

use super::{load_blacklist, load_kb, sibling, usage, write_json, Ctx, Exit};

#[derive(clap::Args)]
pub struct Args {
    /// Knowledge-base snapshot (or TSV).
    #[arg(long)]
    kb: PathBuf,
    /// Entity-expansion blacklist (default: the shipped seed list).
    #[arg(long)]
    blacklist: Option<PathBuf>,
    /// Named recipe; `ce12k` is 6000×(4,6), 2000×(6,1), 2000×(2,3), 2000×(3,2).
    #[arg(long, conflicts_with_all = ["recipe", "count"])]
    preset: Option<String>,
    /// Recipe file with one `count m k` line per entry.
    #[arg(long, conflicts_with = "count")]
    recipe: Option<PathBuf>,
    /// Single-entry recipe: number of subgraphs.
    #[arg(long, requires_all = ["m", "k"])]
    count: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    seed_category: Option<String>,
    /// Seed draws allowed per subgraph before giving up on it.
    #[arg(long)]
    retry_budget: Option<usize>,
    /// Subgraph JSONL to write.
    #[arg(long)]
    output: PathBuf,
}

fn recipe(a: &Args) -> Result<Vec<RecipeEntry>> {
    if let Some(p) = &a.preset {
        return match p.as_str() {
            "ce12k" => Ok(CE12K_PRESET.to_vec()),
            other => Err(usage(format!("unknown preset {other:?}"))),
        };
    }
    if let Some(path) = &a.recipe {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return parse_recipe(&text).map_err(|e| usage(format!("{}: {e}", path.display())));
    }
    match (a.count, a.m, a.k) {
        (Some(count), Some(m), Some(k)) => Ok(vec![RecipeEntry { count, m, k }]),
        _ => Err(usage("give one of --preset, --recipe, or --count with --m and --k")),
    }
}

pub fn run(ctx: &Ctx, a: Args) -> Result<()> {
    let mut man = ctx.start("extract");
    let recipe = recipe(&a)?;
    let kb = load_kb(&a.kb)?;
    let bl = load_blacklist(a.blacklist.as_deref())?;
    let s = &ctx.settings;
    let d = BatchConfig::default();
    let cfg = BatchConfig {
        seed_category: s.get("seed_category", a.seed_category.clone(), d.seed_category)?,
        rng_seed: s.get("seed", a.seed, 0)?,
        retry_budget: s.get("retry_budget", a.retry_budget, d.retry_budget)?,
        jobs: ctx.jobs,
    };
    let rules = RuleSet::shipped();
    let extractor = Extractor::new(&kb, &bl).with_rules(rules);
    let out = batch_extract(&extractor, &recipe, &cfg)?;
    kgforge::jsonl::write(&a.output, &out.subgraphs)?;
    log::info!("wrote {} subgraphs to {}", out.subgraphs.len(), a.output.display());

    man.seeds.insert("rng_seed".into(), cfg.rng_seed);
    man.inputs.push(a.kb.clone());
    man.inputs.extend(a.blacklist.clone());
    man.outputs.push(a.output.clone());
    man.details = serde_json::json!({
        "recipe": recipe,
        "produced": out.subgraphs.len(),
        "shortfalls": out.shortfalls,
    });
    if !out.is_complete() {
        let report = sibling(&a.output, ".shortfall.json");
        write_json(&report, &out.shortfalls)?;
        man.status = "partial".into();
        ctx.finish(man, &a.output, false)?;
        return Err(Exit::Partial {
            what: format!("{} recipe entries fell short", out.shortfalls.len()),
            report,
        }
        .into());
    }
    ctx.finish(man, &a.output, false)
}
