mod common;

use common::{random_kb, t};
use kgforge::curate::{curate, CurateConfig, CurateError, EvalRequest, Evaluator, RuleStubEvaluator};
use kgforge::extract::{ExtractionConfig, Extractor, RandomSampler};
use kgforge::filter::Blacklist;
use kgforge::kb::KnowledgeBase;
use kgforge::llm::LlmError;
use kgforge::rng;

fn cfg(seed: u64) -> CurateConfig {
    CurateConfig {
        n_traversals: 40,
        sample_per_traversal: 4,
        m: 3,
        k: 3,
        rng_seed: seed,
        ..CurateConfig::default()
    }
}

fn stub() -> RuleStubEvaluator {
    RuleStubEvaluator::new(["p0", "p1"])
}

#[test]
fn provenance_replays_to_the_same_discovery() {
    let mut r = rng::seeded(3);
    let rk = random_kb(&mut r, 60, 4);
    let c = cfg(11);
    let out = curate(&rk.kb, &Blacklist::new(), &c, &stub()).unwrap();
    assert!(!out.candidates.is_empty());
    let open = Blacklist::new();
    let ex = Extractor::new(&rk.kb, &open);
    for e in out.candidates.entities() {
        let (seed, prov) = out.candidates.provenance(e).unwrap();
        let mut rr = rng::derived(c.rng_seed, &[prov.traversal as u64]);
        let replay_seed = rk.kb.sample_seed(&c.seed_category, &mut rr).unwrap();
        assert_eq!(replay_seed, seed);
        let ecfg = ExtractionConfig::new(c.m, c.k);
        let sg = ex.extract(seed, &ecfg, &mut RandomSampler(&mut rr)).unwrap();
        assert!(
            sg.discovered().contains(&(e.as_str(), prov.hop)),
            "{e} not at hop {}",
            prov.hop
        );
    }
}

#[test]
fn second_pass_adds_nothing_and_output_contains_seed() {
    for seed in 0..8 {
        let mut r = rng::seeded(50 + seed);
        let rk = random_kb(&mut r, 60, 4);
        let first = curate(&rk.kb, &rk.blacklist, &cfg(seed), &stub()).unwrap();
        assert!(rk.blacklist.is_subset(&first.blacklist));
        assert_eq!(first.blacklist.len(), rk.blacklist.len() + first.added.len());
        let second = curate(&rk.kb, &first.blacklist, &cfg(seed), &stub()).unwrap();
        assert!(second.added.is_empty(), "{:?}", second.added);
        assert_eq!(second.blacklist, first.blacklist);
    }
}

#[test]
fn audit_covers_every_candidate_in_order() {
    let mut r = rng::seeded(4);
    let rk = random_kb(&mut r, 60, 4);
    let out = curate(&rk.kb, &Blacklist::new(), &cfg(2), &stub()).unwrap();
    let audited: Vec<&str> = out.audit.iter().map(|a| a.entity.as_str()).collect();
    let cands: Vec<&str> = out.candidates.entities().iter().map(String::as_str).collect();
    assert_eq!(audited, cands);
    let yes: Vec<&str> = out
        .audit
        .iter()
        .filter(|a| a.verdict == "YES")
        .map(|a| a.entity.as_str())
        .collect();
    assert_eq!(yes, out.added.iter().map(String::as_str).collect::<Vec<_>>());
}

#[test]
fn star_kb_yields_hand_computed_additions() {
    let mut b = KnowledgeBase::builder();
    for (o, p) in [("n1", "knows"), ("n2", "likes"), ("n3", "met"), ("n4", "saw")] {
        b.add_triple(t("root", p, o));
    }
    // n1: only trivial predicates; n2: one informative; n3: trivial plus a rule-failing triple
    b.add_triple(t("n1", "instance of", "thing"));
    b.add_triple(t("n1", "subclass of", "entity"));
    b.add_triple(t("n2", "instance of", "thing"));
    b.add_triple(t("n2", "born in", "Ulm"));
    b.add_triple(t("n3", "part of", "whole"));
    b.add_triple(t("n3", "Commons category", "N3"));
    b.add_category("root", "Human");
    let kb = b.build();
    let c = CurateConfig {
        n_traversals: 3,
        sample_per_traversal: 10,
        m: 10,
        k: 1,
        ..CurateConfig::default()
    };
    let out = curate(&kb, &Blacklist::new(), &c, &RuleStubEvaluator::taxonomic()).unwrap();
    // n4 has no outgoing triples so it is never a candidate
    assert_eq!(out.candidates.entities(), ["n1", "n2", "n3"]);
    assert_eq!(out.added, ["n1", "n3"]);
    assert!(out.blacklist.contains("n1", None) && !out.blacklist.contains("n2", None));
}

struct FailAfter(usize, std::sync::atomic::AtomicUsize);

impl Evaluator for FailAfter {
    fn judge(&self, _r: &EvalRequest<'_>) -> Result<String, LlmError> {
        let n = self.1.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
        if n >= self.0 {
            Err(LlmError::Transport("down".into()))
        } else {
            Ok("NO".into())
        }
    }
}

#[test]
fn unavailable_evaluator_returns_partial_blacklist() {
    let mut r = rng::seeded(5);
    let rk = random_kb(&mut r, 60, 4);
    let c = CurateConfig { jobs: 1, ..cfg(1) };
    let err = curate(&rk.kb, &rk.blacklist, &c, &FailAfter(2, Default::default())).unwrap_err();
    match err {
        CurateError::EvaluatorUnavailable { partial, .. } => {
            assert_eq!(partial.blacklist, rk.blacklist);
            assert!(partial.audit.iter().any(|a| a.verdict == "UNAVAILABLE"));
        }
        other => panic!("unexpected {other}"),
    }
}
