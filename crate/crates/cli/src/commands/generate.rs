use std::path::PathBuf;

use anyhow::Result;
use kgforge::extract::Subgraph;
use kgforge::llm::{ChatClient, ChatConfig, HttpChatClient, MockClient};
use kgforge::synth::{generate_texts, GenerationConfig, TemplateClient};

use super::{sibling, usage, Ctx, Exit};

#[derive(clap::Args)]
pub struct Args {
    /// Subgraph JSONL produced by `extract`.
    #[arg(long)]
    input: PathBuf,
    /// `mock` (offline triple verbalizer), `fixed` (same reply every time,
    /// see --reply) or `http` (chat endpoint from llm_url / llm_model).
    #[arg(long, default_value = "mock")]
    client: String,
    #[arg(long)]
    reply: Option<String>,
    /// Extra attempts per subgraph after an empty or failed reply.
    #[arg(long)]
    retries: Option<usize>,
    /// Sample JSONL to write.
    #[arg(long)]
    output: PathBuf,
}

fn client(ctx: &Ctx, a: &Args) -> Result<Box<dyn ChatClient>> {
    Ok(match a.client.as_str() {
        "mock" => Box::new(TemplateClient),
        "fixed" => Box::new(MockClient::new(a.reply.clone().unwrap_or_default())),
        "http" => {
            let url: Option<String> = ctx.settings.get_opt("llm_url", None)?;
            let model: Option<String> = ctx.settings.get_opt("llm_model", None)?;
            let (Some(url), Some(model)) = (url, model) else {
                return Err(Exit::BackendUnavailable("llm_url and llm_model must be set".into()).into());
            };
            let mut cfg = ChatConfig::new(url, model);
            cfg.api_key = ctx.settings.get_opt("llm_key", None)?;
            cfg.temperature = ctx.settings.get("temperature", None, 0.0)?;
            Box::new(HttpChatClient::new(cfg)?)
        }
        other => return Err(usage(format!("unknown client {other:?}"))),
    })
}

pub fn run(ctx: &Ctx, a: Args) -> Result<()> {
    let mut m = ctx.start("generate-text");
    let client = client(ctx, &a)?;
    let subgraphs: Vec<Subgraph> = kgforge::jsonl::read(&a.input)?;
    let cfg = GenerationConfig {
        retries: ctx
            .settings
            .get("retries", a.retries, GenerationConfig::default().retries)?,
        jobs: ctx.jobs,
    };
    let out = generate_texts(client.as_ref(), &subgraphs, &cfg);
    kgforge::jsonl::write(&a.output, &out.samples)?;
    log::info!("wrote {} samples, dropped {}", out.samples.len(), out.drops.len());

    m.inputs.push(a.input.clone());
    m.outputs.push(a.output.clone());
    m.details = serde_json::json!({
        "client": a.client,
        "model": client.model_id(),
        "prompt_version": kgforge::prompts::PROMPT_VERSION,
        "requested": out.requested,
        "written": out.samples.len(),
        "dropped": out.drops.len(),
    });
    let report = sibling(&a.output, ".drops.jsonl");
    kgforge::jsonl::write(&report, &out.drops)?;
    m.outputs.push(report.clone());
    if out.backend_unavailable {
        m.status = "backend_unavailable".into();
        ctx.finish(m, &a.output, false)?;
        return Err(Exit::BackendUnavailable(out.drops[0].reason.clone()).into());
    }
    if out.failed() {
        m.status = "partial".into();
        ctx.finish(m, &a.output, false)?;
        return Err(Exit::Partial {
            what: format!("{:.1}% of samples dropped", out.drop_rate() * 100.0),
            report,
        }
        .into());
    }
    ctx.finish(m, &a.output, false)
}
