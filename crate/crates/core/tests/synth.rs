mod common;

use std::collections::HashMap;
use std::sync::Mutex;

use common::{random_kb, t};
use kgforge::extract::{batch_extract, BatchConfig, Extractor, RecipeEntry, Subgraph};
use kgforge::llm::{ChatClient, LlmError, MockClient};
use kgforge::prompts::{render_kg2text_prompt, triples_from_kg2text_prompt, PROMPT_VERSION};
use kgforge::rng;
use kgforge::synth::{assemble, generate_texts, read_split, write_dataset, GenerationConfig, TemplateClient};
use proptest::prelude::*;

fn subgraphs(n: usize) -> Vec<Subgraph> {
    let mut r = rng::seeded(21);
    let rk = random_kb(&mut r, 80, 4);
    let ex = Extractor::new(&rk.kb, &rk.blacklist);
    let recipe = [RecipeEntry { count: n, m: 3, k: 3 }];
    batch_extract(&ex, &recipe, &BatchConfig::default()).unwrap().subgraphs
}

#[test]
fn samples_keep_subgraph_triples_and_metadata() {
    let sgs = subgraphs(30);
    let out = generate_texts(&TemplateClient, &sgs, &GenerationConfig::default());
    assert!(out.drops.is_empty());
    assert_eq!(out.samples.len(), sgs.len());
    for (s, g) in out.samples.iter().zip(&sgs) {
        assert_eq!(s.triples, g.triples);
        assert_eq!((s.meta.seed.as_str(), s.meta.m, s.meta.k), (g.seed.as_str(), g.m, g.k));
        assert_eq!(s.meta.generator, "template");
        assert_eq!(s.meta.prompt_version, PROMPT_VERSION);
        assert!(!s.text.trim().is_empty());
    }
}

#[test]
fn dataset_round_trips_through_jsonl() {
    let sgs = subgraphs(25);
    let out = generate_texts(&TemplateClient, &sgs, &GenerationConfig::default());
    let ds = assemble(out.samples.clone(), 0.8, 9).unwrap();
    assert_eq!((ds.train.len(), ds.test.len()), (20, 5));
    assert_eq!(ds, assemble(out.samples.clone(), 0.8, 9).unwrap());
    let dir = tempfile::tempdir().unwrap();
    write_dataset(dir.path(), &ds).unwrap();
    assert_eq!(read_split(dir.path(), 9).unwrap(), ds);

    let mut all: Vec<_> = ds
        .train
        .iter()
        .chain(&ds.test)
        .map(|s| serde_json::to_string(s).unwrap())
        .collect();
    let mut orig: Vec<_> = out.samples.iter().map(|s| serde_json::to_string(s).unwrap()).collect();
    all.sort();
    orig.sort();
    assert_eq!(all, orig);
}

#[test]
fn empty_replies_are_dropped_and_reported() {
    let sgs = subgraphs(10);
    let out = generate_texts(&MockClient::new("   "), &sgs, &GenerationConfig { retries: 2, jobs: 1 });
    assert!(out.samples.is_empty());
    assert_eq!(out.drops.len(), 10);
    assert!(out.drops.iter().all(|d| d.attempts == 3));
    assert!(out.failed());
}

struct Flaky(Mutex<HashMap<String, usize>>);

impl ChatClient for Flaky {
    fn complete(&self, prompt: &str) -> Result<String, LlmError> {
        let mut seen = self.0.lock().unwrap();
        let n = seen.entry(prompt.to_string()).or_default();
        *n += 1;
        if *n == 1 {
            Err(LlmError::Transport("reset".into()))
        } else {
            Ok("Text: fine.".into())
        }
    }

    fn model_id(&self) -> String {
        "flaky".into()
    }
}

#[test]
fn transient_failures_are_retried() {
    let sgs = subgraphs(10);
    let out = generate_texts(&Flaky(Mutex::default()), &sgs, &GenerationConfig::default());
    assert_eq!(out.samples.len(), sgs.len());
    assert!(out.samples.iter().all(|s| s.text == "fine."));
}

#[test]
fn quoted_fields_survive_prompt_embedding() {
    let triples = vec![
        t(
            "Poland",
            "Wolfram Language entity code",
            r#"Entity["Country", "Poland"]"#,
        ),
        t("a \"b\"", "back\\slash", "new\nline"),
    ];
    let prompt = render_kg2text_prompt(&triples);
    assert_eq!(triples_from_kg2text_prompt(&prompt).unwrap(), triples);
}

proptest! {
    #[test]
    fn arbitrary_fields_survive_prompt_embedding(
        raw in prop::collection::vec(("[a-zA-Z\"\\\\ \\[\\],']{1,12}", "[a-z ]{1,8}", "\\PC{1,12}"), 1..6)
    ) {
        let triples: Vec<_> = raw
            .iter()
            .filter_map(|(s, p, o)| kgforge::Triple::new(s.clone(), p.clone(), o.clone()).ok())
            .collect();
        prop_assume!(!triples.is_empty());
        let prompt = render_kg2text_prompt(&triples);
        prop_assert_eq!(triples_from_kg2text_prompt(&prompt).unwrap(), triples);
    }
}
