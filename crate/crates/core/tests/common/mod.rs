#![allow(dead_code)]

use std::collections::HashSet;

use kgforge::filter::{apply_rules, Blacklist};
use kgforge::kb::KnowledgeBase;
use kgforge::Triple;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn t(s: &str, p: &str, o: &str) -> Triple {
    Triple::new(s, p, o).unwrap()
}

pub const PREDICATES: [&str; 6] = [
    "spouse",
    "occupation",
    "member of",
    "located in",
    "instance of",
    "award",
];

/// Triples that each break exactly one rule.
pub fn noise_triple<R: Rng>(rng: &mut R, subject: &str) -> Triple {
    match rng.gen_range(0..7) {
        0 => t(subject, "Commons category", "Some page"),
        1 => t(subject, "VIAF ID", "12345"),
        2 => t(subject, "official website", "https://example.org/x"),
        3 => t(subject, "native label", "Ωμέγα"),
        4 => t(subject, "topic's main category", "Category:Things"),
        5 => t(subject, "said to be the same as", "Q1234567"),
        _ => t(subject, "hashtag", subject),
    }
}

pub struct RandomKb {
    pub kb: KnowledgeBase,
    /// Ingestion order, duplicates removed.
    pub triples: Vec<Triple>,
    pub blacklist: Blacklist,
    pub entities: Vec<String>,
}

/// `n` entities `E0..`, about `out` outgoing triples each, with rule noise,
/// repeated (subject, predicate) pairs, Q-ids on some entities, a "Human"
/// category and a blacklist that mixes id and label matches.
pub fn random_kb<R: Rng>(rng: &mut R, n: usize, out: usize) -> RandomKb {
    let entities: Vec<String> = (0..n).map(|i| format!("E{i}")).collect();
    let mut b = KnowledgeBase::builder();
    let mut seen = HashSet::new();
    let mut triples = Vec::new();
    for (i, e) in entities.iter().enumerate() {
        let id = (i % 3 == 0).then(|| format!("Q{}", 100 + i));
        b.add_entity(e, id.as_deref());
        if i % 2 == 0 || i < 3 {
            b.add_category(e, "Human");
        }
        let k = rng.gen_range(0..=out * 2);
        for _ in 0..k {
            let tr = if rng.gen_bool(0.15) {
                noise_triple(rng, e)
            } else {
                let p = *PREDICATES.choose(rng).unwrap();
                let o = if rng.gen_bool(0.8) {
                    entities.choose(rng).unwrap().clone()
                } else {
                    format!("literal {}", rng.gen_range(0..20))
                };
                if &o == e {
                    continue;
                }
                t(e, p, &o)
            };
            if seen.insert(tr.clone()) {
                triples.push(tr.clone());
            }
            b.add_triple(tr);
        }
    }
    let kb = b.build();
    let mut blacklist = Blacklist::new();
    for (i, e) in entities.iter().enumerate() {
        if rng.gen_bool(0.1) {
            let id = kb.external_id(e).map(str::to_string);
            if id.is_some() && i % 2 == 0 {
                // id-matched entry under a different label
                blacklist.insert(&format!("alias of {e}"), id.as_deref());
            } else {
                blacklist.insert(e, None);
            }
        }
    }
    RandomKb {
        kb,
        triples,
        blacklist,
        entities,
    }
}

/// Subject–predicate uniqueness by direct scan of the full triple list.
pub fn naive_sp_unique(all: &[Triple], s: &str, p: &str) -> bool {
    let objects: HashSet<&str> = all
        .iter()
        .filter(|t| t.subject == s && t.predicate == p && apply_rules(t).passed())
        .map(|t| t.object.as_str())
        .collect();
    objects.len() <= 1
}

/// `F_valid(s)` by direct scan.
pub fn naive_valid(all: &[Triple], kb: &KnowledgeBase, bl: &Blacklist, s: &str) -> Vec<Triple> {
    if bl.contains(s, kb.external_id(s)) {
        return Vec::new();
    }
    all.iter()
        .filter(|t| t.subject == s)
        .filter(|t| apply_rules(t).passed())
        .filter(|t| naive_sp_unique(all, s, &t.predicate))
        .cloned()
        .collect()
}

/// Hop-by-hop recursion with the first `m` valid candidates per expanded
/// entity; each entity expands at its first hop only.
pub fn reference_extract(
    all: &[Triple],
    kb: &KnowledgeBase,
    bl: &Blacklist,
    seed: &str,
    m: usize,
    k: usize,
) -> Vec<(Triple, usize)> {
    let mut out: Vec<(Triple, usize)> = Vec::new();
    let mut expanded: HashSet<String> = HashSet::new();
    let mut frontier = vec![seed.to_string()];
    for h in 1..=k {
        let mut next: Vec<String> = Vec::new();
        for e in &frontier {
            if !expanded.insert(e.clone()) {
                continue;
            }
            for tr in naive_valid(all, kb, bl, e).into_iter().take(m) {
                if !next.contains(&tr.object) {
                    next.push(tr.object.clone());
                }
                if !out.iter().any(|(x, _)| *x == tr) {
                    out.push((tr, h));
                }
            }
        }
        frontier = next;
    }
    out
}
