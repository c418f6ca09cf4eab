use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use kgforge::curate::{
    self, ChatEvaluator, ConstantEvaluator, CurateConfig, CurateError, Evaluator, RuleStubEvaluator,
};
use kgforge::llm::{ChatConfig, HttpChatClient};

use super::{create, load_blacklist, load_kb, sibling, usage, Ctx, Exit};

#[derive(clap::Args)]
pub struct Args {
    /// Knowledge-base snapshot (or TSV).
    #[arg(long)]
    kb: PathBuf,
    /// Blacklist to extend (default: the shipped seed list).
    #[arg(long)]
    seed_blacklist: Option<PathBuf>,
    /// `stub` (taxonomic-predicate rule), `llm` (chat endpoint), or
    /// `const:YES` / `const:NO`.
    #[arg(long, default_value = "stub")]
    evaluator: String,
    #[arg(long)]
    traversals: Option<usize>,
    #[arg(long)]
    per_traversal: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    seed_category: Option<String>,
    /// Outgoing triples shown to the evaluator per entity.
    #[arg(long)]
    max_triples: Option<usize>,
    /// Blacklist file to write.
    #[arg(long)]
    output: PathBuf,
    /// Per-candidate verdict log (default: `<output>.audit.jsonl`).
    #[arg(long)]
    audit: Option<PathBuf>,
}

fn build_evaluator(ctx: &Ctx, spec: &str) -> Result<Box<dyn Evaluator>> {
    Ok(match spec {
        "stub" => Box::new(RuleStubEvaluator::taxonomic()),
        "llm" => {
            let url: Option<String> = ctx.settings.get_opt("llm_url", None)?;
            let model: Option<String> = ctx.settings.get_opt("llm_model", None)?;
            let (Some(url), Some(model)) = (url, model) else {
                return Err(Exit::BackendUnavailable("llm_url and llm_model must be set".into()).into());
            };
            let mut cfg = ChatConfig::new(url, model);
            cfg.api_key = ctx.settings.get_opt("llm_key", None)?;
            cfg.temperature = ctx.settings.get("temperature", None, 0.0)?;
            Box::new(ChatEvaluator(HttpChatClient::new(cfg)?))
        }
        other => match other.strip_prefix("const:") {
            Some(reply) => Box::new(ConstantEvaluator(reply.to_string())),
            None => return Err(usage(format!("unknown evaluator {other:?}"))),
        },
    })
}

pub fn run(ctx: &Ctx, a: Args) -> Result<()> {
    let mut m = ctx.start("curate-blacklist");
    let kb = load_kb(&a.kb)?;
    let seed_bl = load_blacklist(a.seed_blacklist.as_deref())?;
    let s = &ctx.settings;
    let d = CurateConfig::default();
    let cfg = CurateConfig {
        n_traversals: a.traversals.unwrap_or(d.n_traversals),
        sample_per_traversal: a.per_traversal.unwrap_or(d.sample_per_traversal),
        m: a.m.unwrap_or(d.m),
        k: a.k.unwrap_or(d.k),
        seed_category: s.get("seed_category", a.seed_category, d.seed_category)?,
        rng_seed: s.get("seed", a.seed, 0)?,
        max_triples: s.get("max_triples", a.max_triples, d.max_triples)?,
        jobs: ctx.jobs,
    };
    let evaluator = build_evaluator(ctx, &a.evaluator)?;
    let audit_path = a.audit.unwrap_or_else(|| sibling(&a.output, ".audit.jsonl"));

    let (outcome, failure) = match curate::curate(&kb, &seed_bl, &cfg, evaluator.as_ref()) {
        Ok(o) => (o, None),
        Err(CurateError::EvaluatorUnavailable { partial, source }) => (*partial, Some(source)),
        Err(e) => return Err(e.into()),
    };

    let mut w = create(&a.output)?;
    outcome.blacklist.write_to(&mut w)?;
    w.flush()?;
    kgforge::jsonl::write(&audit_path, &outcome.audit).context("writing audit log")?;
    log::info!(
        "{} candidates, {} added, blacklist now {} entries",
        outcome.candidates.len(),
        outcome.added.len(),
        outcome.blacklist.len()
    );

    m.seeds.insert("rng_seed".into(), cfg.rng_seed);
    m.inputs.push(a.kb.clone());
    m.inputs.extend(a.seed_blacklist);
    m.outputs.push(a.output.clone());
    m.outputs.push(audit_path.clone());
    m.details = serde_json::json!({
        "evaluator": a.evaluator,
        "config": cfg,
        "candidates": outcome.candidates.len(),
        "added": outcome.added,
        "blacklist_size": outcome.blacklist.len(),
    });
    if let Some(err) = failure {
        m.status = "backend_unavailable".into();
        ctx.finish(m, &a.output, false)?;
        return Err(Exit::BackendUnavailable(format!(
            "{err}; partial blacklist and audit written to {} and {}",
            a.output.display(),
            audit_path.display()
        ))
        .into());
    }
    ctx.finish(m, &a.output, false)
}
